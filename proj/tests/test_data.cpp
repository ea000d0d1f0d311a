// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "labelnoise/csv.hpp"
#include "labelnoise/idx.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/standardize.hpp"
#include "labelnoise/synth.hpp"

using namespace labelnoise;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

RawDigits tiny_digits() {
    RawDigits raw;
    raw.image_rows = 2;
    raw.image_cols = 2;
    raw.pixels = Matrix{{0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0},
                        {1.0, 1.0, 0.0, 3.0 / 255.0}};
    raw.labels = {3, 4};
    return raw;
}

}  // namespace

TEST_CASE("IDX files round-trip bit-exactly") {
    TempFile imgs("t_images.idx"), lbls("t_labels.idx");
    const RawDigits raw = tiny_digits();
    save_idx(imgs.path, lbls.path, raw.pixels, raw.labels, 2, 2);
    const RawDigits back = load_idx(imgs.path, lbls.path);
    CHECK(back.image_rows == 2);
    CHECK(back.image_cols == 2);
    CHECK(back.pixels == raw.pixels);
    CHECK(back.labels == raw.labels);
}

TEST_CASE("pixel byte 255 maps to feature 1.0") {
    const RawDigits raw = tiny_digits();
    CHECK(raw.pixels(0, 1) == 1.0);
}

TEST_CASE("IDX loader rejects a bad magic with the offset") {
    TempFile imgs("t_badmagic_images.idx"), lbls("t_badmagic_labels.idx");
    const RawDigits raw = tiny_digits();
    save_idx(imgs.path, lbls.path, raw.pixels, raw.labels, 2, 2);
    {
        std::fstream f(imgs.path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(2);
        f.put(char(0x09));
    }
    try {
        load_idx(imgs.path, lbls.path);
        FAIL("expected a format error");
    } catch (const io::FormatError& e) {
        CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
    }
}

TEST_CASE("IDX loader rejects truncated payloads with the offset") {
    TempFile imgs("t_trunc_images.idx"), lbls("t_trunc_labels.idx");
    const RawDigits raw = tiny_digits();
    save_idx(imgs.path, lbls.path, raw.pixels, raw.labels, 2, 2);
    {
        std::ofstream f(imgs.path, std::ios::binary | std::ios::in | std::ios::ate);
        // keep header + first image only
    }
    // Rewrite truncated copy.
    std::ifstream in(imgs.path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(imgs.path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(16 + 4));  // half of image 2 missing
    out.close();
    try {
        load_idx(imgs.path, lbls.path);
        FAIL("expected a format error");
    } catch (const io::FormatError& e) {
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
}

TEST_CASE("IDX loader rejects image/label count mismatch") {
    TempFile imgs("t_count_images.idx"), lbls("t_count_labels.idx");
    const RawDigits raw = tiny_digits();
    save_idx(imgs.path, lbls.path, raw.pixels, raw.labels, 2, 2);
    TempFile imgs2("t_count_images2.idx"), lbls2("t_count_labels2.idx");
    save_idx(imgs2.path, lbls2.path, raw.pixels.row(0), {raw.labels[0]}, 2, 2);
    // One image against the original two labels.
    CHECK_THROWS_AS(load_idx(imgs2.path, lbls.path), io::FormatError);
}

TEST_CASE("binary regrouping maps digits 0-3 to class 0 and 4-9 to class 1") {
    const LabeledDataset ds = binarize_mnist(tiny_digits());
    CHECK(ds.class_count == 2);
    CHECK(ds.observed_class(0) == 0);  // digit 3
    CHECK(ds.observed_class(1) == 1);  // digit 4
    CHECK(ds.ground_truth[0] == 0);
    CHECK(ds.ground_truth[1] == 1);
    CHECK(ds.labels(0, 0) == 1.0);
    CHECK(ds.labels(1, 1) == 1.0);
}

TEST_CASE("csv windowing flattens 60 rows x 15 sensors into 2 samples") {
    TempFile csv("t_window.csv");
    {
        std::ofstream f(csv.path);
        f << "s1";
        for (int s = 2; s <= 15; ++s) f << ",s" << s;
        f << ",fault\n";
        for (int r = 0; r < 60; ++r) {
            for (int s = 0; s < 15; ++s) f << (s ? "," : "") << r * 0.1 + s;
            f << "," << (r >= 30 ? 1 : 0) << "\n";
        }
    }
    std::vector<std::string> sensors;
    for (int s = 1; s <= 15; ++s) sensors.push_back("s" + std::to_string(s));
    const LabeledDataset ds = window_csv(read_csv(csv.path), sensors, "fault", 30);
    REQUIRE(ds.size() == 2);
    CHECK(ds.features.cols() == 450);
    CHECK(ds.observed_class(0) == 0);
    CHECK(ds.observed_class(1) == 1);
    CHECK(ds.features(0, 0) == Catch::Approx(0.0));
    CHECK(ds.features(1, 1) == Catch::Approx(3.0 + 1));  // row 30, sensor s2
}

TEST_CASE("csv errors carry row and column positions") {
    TempFile csv("t_badcell.csv");
    {
        std::ofstream f(csv.path);
        f << "a,b,fault\n";
        for (int r = 0; r < 30; ++r)
            f << r << "," << (r == 7 ? "oops" : "1.5") << ",0\n";
    }
    try {
        window_csv(read_csv(csv.path), {"a", "b"}, "fault", 30);
        FAIL("expected a format error");
    } catch (const io::FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 9") != std::string::npos);
        CHECK(msg.find("oops") != std::string::npos);
    }
    CHECK_THROWS_AS(window_csv(read_csv(csv.path), {"a", "missing"}, "fault", 30),
                    io::FormatError);
}

TEST_CASE("constant columns standardize to zero with std clamped to one") {
    Matrix features{{5.0, 1.0}, {5.0, 3.0}, {5.0, 5.0}};
    Standardizer st;
    st.fit(features);
    CHECK(st.stds[0] == 1.0);
    st.apply(features);
    for (std::size_t i = 0; i < 3; ++i) CHECK(features(i, 0) == 0.0);
}

TEST_CASE("standardized training features recompute to zero mean, unit std") {
    LabeledDataset ds = synth_bdd(31, 40, 40);
    Standardizer st;
    st.fit(ds.features);
    st.apply(ds.features);
    for (std::size_t j = 0; j < ds.features.cols(); ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i) m += ds.features(i, j);
        m /= ds.size();
        double var = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i)
            var += (ds.features(i, j) - m) * (ds.features(i, j) - m);
        const double sd = std::sqrt(var / ds.size());
        CHECK(std::abs(m) < 1e-9);
        CHECK(std::abs(sd - 1.0) < 1e-6);
    }
}

TEST_CASE("synthetic generators are deterministic in the seed") {
    const LabeledDataset a = synth_bdd(77, 30, 34);
    const LabeledDataset b = synth_bdd(77, 30, 34);
    const LabeledDataset c = synth_bdd(78, 30, 34);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.features.data() != c.features.data());
    CHECK(a.size() == 64);
    std::size_t class0 = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.ground_truth[i] == 0) ++class0;
    CHECK(class0 == 30);

    const RawDigits d1 = synth_digits(5, 50);
    const RawDigits d2 = synth_digits(5, 50);
    CHECK(d1.pixels == d2.pixels);
    CHECK(d1.labels == d2.labels);
}

TEST_CASE("noise injection flips the exact count away from the truth") {
    LabeledDataset ds = binarize_mnist(synth_digits(3, 1000));
    SeededRng rng(4);
    LabeledDataset noisy = ds;
    const NoiseRecord rec = inject_symmetric_noise(noisy, 0.4, rng);
    CHECK(rec.flipped.size() == 400);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        if (noisy.observed_class(i) != noisy.ground_truth[i]) ++mismatches;
        CHECK(noisy.ground_truth[i] == ds.ground_truth[i]);
    }
    CHECK(mismatches == 400);
}

TEST_CASE("zero noise is a no-op") {
    LabeledDataset ds = binarize_mnist(synth_digits(6, 100));
    SeededRng rng(7);
    LabeledDataset copy = ds;
    const NoiseRecord rec = inject_symmetric_noise(copy, 0.0, rng);
    CHECK(rec.flipped.empty());
    CHECK(copy.labels == ds.labels);
}

TEST_CASE("noise injection rejects ratios of one half and beyond") {
    LabeledDataset ds = binarize_mnist(synth_digits(8, 100));
    SeededRng rng(9);
    CHECK_THROWS_AS(inject_symmetric_noise(ds, 0.5, rng), std::invalid_argument);
    CHECK_THROWS_AS(inject_symmetric_noise(ds, -0.1, rng), std::invalid_argument);
}

TEST_CASE("noise positions depend only on the seed") {
    LabeledDataset base = binarize_mnist(synth_digits(10, 500));
    LabeledDataset a = base, b = base, c = base;
    SeededRng r1(11), r2(11), r3(12);
    CHECK(inject_symmetric_noise(a, 0.2, r1).flipped ==
          inject_symmetric_noise(b, 0.2, r2).flipped);
    CHECK(inject_symmetric_noise(c, 0.2, r3).flipped !=
          inject_symmetric_noise(base, 0.2, r1).flipped);
}

TEST_CASE("binary noise injection is involutive on the flipped rows") {
    LabeledDataset ds = binarize_mnist(synth_digits(13, 200));
    SeededRng rng(14);
    LabeledDataset noisy = ds;
    const NoiseRecord rec = inject_symmetric_noise(noisy, 0.3, rng);
    for (SampleId id : rec.flipped) {
        std::size_t row = 0;
        while (noisy.ids[row] != id) ++row;
        // Flip back by hand: with two classes the other class is the truth.
        const std::size_t observed = noisy.observed_class(row);
        CHECK(1 - observed == noisy.ground_truth[row]);
    }
}

TEST_CASE("split uses floor rounding and partitions the ids") {
    LabeledDataset ds = synth_bdd(15, 623, 624);
    REQUIRE(ds.size() == 1247);
    SeededRng rng(16);
    const auto [train, test] = split(ds, 0.2, rng);
    CHECK(test.size() == 249);  // floor(0.2 * 1247)
    CHECK(train.size() == 998);
    std::set<SampleId> ids(train.ids.begin(), train.ids.end());
    ids.insert(test.ids.begin(), test.ids.end());
    CHECK(ids.size() == 1247);

    SeededRng rng2(16);
    const auto [train2, test2] = split(ds, 0.2, rng2);
    CHECK(test2.ids == test.ids);
}

TEST_CASE("dataset container round-trips") {
    LabeledDataset ds = synth_bdd(17, 20, 20);
    const std::string path = "t_dataset.lnds";
    TempFile guard(path);
    save_dataset(path, ds);
    const LabeledDataset back = load_dataset(path);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    CHECK(back.ids == ds.ids);
    CHECK(back.ground_truth == ds.ground_truth);
    CHECK(back.class_count == 2);
}
