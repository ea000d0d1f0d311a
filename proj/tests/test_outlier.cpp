// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "labelnoise/gradients.hpp"
#include "labelnoise/outlier.hpp"
#include "labelnoise/stats.hpp"

using namespace labelnoise;

namespace {

MlpModel random_model(const std::vector<std::size_t>& widths, std::uint64_t seed) {
    SeededRng rng(seed);
    return make_mlp(widths, rng);
}

LabeledDataset random_dataset(std::size_t n, std::size_t d, std::size_t classes,
                              std::uint64_t seed) {
    SeededRng rng(seed);
    LabeledDataset ds;
    ds.class_count = classes;
    ds.features = Matrix(n, d);
    for (double& x : ds.features.data()) x = rng.gaussian();
    ds.labels = Matrix(n, classes);
    for (std::size_t i = 0; i < n; ++i) {
        ds.labels(i, rng.uniform_index(classes)) = 1.0;
        ds.ids.push_back(i);
        ds.ground_truth.push_back(0);
    }
    return ds;
}

// Brute force: per-sample CE loss with the hard argmax label, one central
// finite difference per weight, then the plain average per layer.
std::vector<double> brute_force_layer_means(MlpModel model, const LabeledDataset& ds,
                                            std::size_t row) {
    Matrix x = ds.features.row(row);
    const std::size_t hard = ds.observed_class(row);
    auto ce = [&](const MlpModel& m) {
        ForwardTrace t = forward(m, x);
        return -safe_log(t.probabilities(0, hard));
    };
    const double h = 1e-6;
    std::vector<double> means;
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        double sum = 0.0;
        for (std::size_t k = 0; k < model.weights[l].size(); ++k) {
            double& w = model.weights[l].data()[k];
            const double saved = w;
            w = saved + h;
            const double up = ce(model);
            w = saved - h;
            const double down = ce(model);
            w = saved;
            sum += (up - down) / (2 * h);
        }
        means.push_back(sum / static_cast<double>(model.weights[l].size()));
    }
    return means;
}

std::vector<ClassifiedSummary> one_layer_class(const std::vector<double>& values) {
    std::vector<ClassifiedSummary> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ClassifiedSummary cs;
        cs.summary = {i, {values[i]}};
        cs.class_id = 0;
        out.push_back(cs);
    }
    return out;
}

}  // namespace

TEST_CASE("layer-mean summary is zero at the first layer for zero input") {
    MlpModel m = random_model({4, 3, 2}, 1);
    LabeledDataset ds = random_dataset(3, 4, 2, 2);
    for (std::size_t c = 0; c < 4; ++c) ds.features(1, c) = 0.0;
    auto summaries = layer_mean_gradients(m, ds, {0, 1, 2});
    CHECK(summaries[1].layer_means[0] == 0.0);
    CHECK(summaries[0].layer_means[0] != 0.0);
}

TEST_CASE("single linear layer summary equals the product of vector means") {
    // For one dense layer the gradient is the outer product of input and
    // delta, so the entry mean factorizes; cross-check on a 2x3 hand case
    // against the brute-force route.
    MlpModel m = random_model({2, 3}, 3);
    LabeledDataset ds = random_dataset(1, 2, 3, 4);
    auto summaries = layer_mean_gradients(m, ds, {0});
    auto brute = brute_force_layer_means(m, ds, 0);
    CHECK(summaries[0].layer_means[0] == Catch::Approx(brute[0]).margin(1e-8));
}

TEST_CASE("summaries match the per-weight brute-force oracle") {
    MlpModel m = random_model({5, 7, 4, 2}, 5);
    LabeledDataset ds = random_dataset(10, 5, 2, 6);
    std::vector<std::size_t> rows(10);
    std::iota(rows.begin(), rows.end(), 0);
    auto summaries = layer_mean_gradients(m, ds, rows);
    REQUIRE(summaries.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        auto brute = brute_force_layer_means(m, ds, i);
        REQUIRE(summaries[i].layer_means.size() == brute.size());
        for (std::size_t l = 0; l < brute.size(); ++l)
            CHECK(summaries[i].layer_means[l] == Catch::Approx(brute[l]).margin(1e-8));
    }
}

TEST_CASE("identical summaries clamp the IQR and flag nothing") {
    auto summaries = one_layer_class(std::vector<double>(50, 0.25));
    OutlierReport r = detect_outliers(summaries, 0.0001, 0.5);
    CHECK(r.outliers.empty());
    CHECK(r.consistent.size() == 50);
    REQUIRE(r.per_class.size() == 1);
    CHECK(r.per_class[0].iqr[0] == 0.0001);
    CHECK(r.per_class[0].wh_up[0] == Catch::Approx(0.25 + 1.5 * 0.0001));
}

TEST_CASE("a single extreme sample is flagged") {
    std::vector<double> values(99, 0.0);
    values.push_back(10.0);
    OutlierReport r = detect_outliers(one_layer_class(values), 0.0001, 0.10);
    REQUIRE(r.outliers.size() == 1);
    CHECK(r.outliers[0] == 99);
    CHECK(r.deviation_score.at(99) > 0.0);
}

TEST_CASE("cap keeps only the highest deviation scores") {
    // 100 samples, 30 raw outliers of increasing magnitude, cap 10%.
    std::vector<double> values(70, 0.0);
    for (int i = 0; i < 30; ++i) values.push_back(5.0 + i);
    OutlierReport r = detect_outliers(one_layer_class(values), 0.0001, 0.10);
    REQUIRE(r.outliers.size() == 10);
    // The 10 largest values sit at ids 90..99.
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::find(r.outliers.begin(), r.outliers.end(), 90 + i) != r.outliers.end());
}

TEST_CASE("detection is invariant to sample order within a class") {
    SeededRng rng(7);
    std::vector<double> values(60);
    for (double& v : values) v = rng.gaussian();
    values[13] = 40.0;
    auto a = one_layer_class(values);
    auto b = a;
    std::shuffle(b.begin(), b.end(), rng.engine());
    OutlierReport ra = detect_outliers(a, 0.0001, 0.3);
    OutlierReport rb = detect_outliers(b, 0.0001, 0.3);
    CHECK(ra.outliers == rb.outliers);
    CHECK(ra.consistent == rb.consistent);
}

TEST_CASE("removing a non-outlier keeps the extreme flagged") {
    std::vector<double> values(99, 0.0);
    values.push_back(10.0);
    auto summaries = one_layer_class(values);
    OutlierReport before = detect_outliers(summaries, 0.0001, 0.10);
    summaries.erase(summaries.begin() + 5);
    OutlierReport after = detect_outliers(summaries, 0.0001, 0.10);
    CHECK(std::find(before.outliers.begin(), before.outliers.end(), 99) != before.outliers.end());
    CHECK(std::find(after.outliers.begin(), after.outliers.end(), 99) != after.outliers.end());
}

TEST_CASE("per-class outlier count never exceeds the cap") {
    SeededRng rng(8);
    for (double cap : {0.10, 0.30, 0.50}) {
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 8 + rng.uniform_index(200);
            std::vector<double> values(n);
            for (double& v : values) v = std::pow(rng.gaussian(), 3);
            OutlierReport r = detect_outliers(one_layer_class(values), 0.0001, cap);
            const auto bound = static_cast<std::size_t>(std::ceil(cap * n));
            CHECK(r.outliers.size() <= bound);
            CHECK(r.outliers.size() + r.consistent.size() == n);
        }
    }
}

TEST_CASE("composition counts split flagged samples by ground truth") {
    std::vector<ClassifiedSummary> summaries;
    for (std::size_t i = 0; i < 20; ++i) {
        ClassifiedSummary cs;
        cs.summary = {i, {i < 18 ? 0.0 : 50.0}};
        cs.class_id = 0;
        cs.mislabeled = (i == 18);  // one flagged sample truly flipped, one not
        summaries.push_back(cs);
    }
    OutlierReport r = detect_outliers(summaries, 0.0001, 0.5);
    REQUIRE(r.outliers.size() == 2);
    REQUIRE(r.composition.has_value());
    CHECK(r.composition->mislabeled == 1);
    CHECK(r.composition->correctly_labeled == 1);
    CHECK(r.composition->mislabeled + r.composition->correctly_labeled == r.outliers.size());
}

TEST_CASE("classes below four samples are skipped with a warning") {
    std::vector<ClassifiedSummary> summaries;
    for (std::size_t i = 0; i < 3; ++i) {
        ClassifiedSummary cs;
        cs.summary = {i, {static_cast<double>(i) * 100.0}};
        cs.class_id = 7;
        summaries.push_back(cs);
    }
    OutlierReport r = detect_outliers(summaries, 0.0001, 0.5);
    CHECK(r.outliers.empty());
    CHECK(r.consistent.size() == 3);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("class 7") != std::string::npos);
}

TEST_CASE("whisker bounds honour their defining identities") {
    SeededRng rng(9);
    std::vector<double> values(100);
    for (double& v : values) v = rng.gaussian(0.0, 3.0);
    OutlierReport r = detect_outliers(one_layer_class(values), 0.0001, 0.5);
    REQUIRE(r.per_class.size() == 1);
    const auto& wb = r.per_class[0];
    CHECK(wb.p25[0] <= wb.p75[0]);
    CHECK(wb.wh_up[0] - wb.p75[0] == Catch::Approx(1.5 * wb.iqr[0]));
    CHECK(wb.p25[0] - wb.wh_low[0] == Catch::Approx(1.5 * wb.iqr[0]));
    CHECK(wb.p25[0] == Catch::Approx(percentile(values, 0.25)));
    CHECK(wb.p75[0] == Catch::Approx(percentile(values, 0.75)));
}

TEST_CASE("detect_outliers validates its arguments") {
    auto summaries = one_layer_class({1, 2, 3, 4, 5});
    CHECK_THROWS_AS(detect_outliers(summaries, 0.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(detect_outliers(summaries, 0.0001, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(detect_outliers(summaries, 0.0001, 0.6), std::invalid_argument);
}

TEST_CASE("table of noise assumptions") {
    const auto little = NoiseAssumption::little();
    CHECK(little.upper_threshold == 0.10);
    CHECK(little.alpha == 0.4);
    const auto medium = NoiseAssumption::medium();
    CHECK(medium.upper_threshold == 0.30);
    CHECK(medium.alpha == 8.0);
    const auto massive = NoiseAssumption::massive();
    CHECK(massive.upper_threshold == 0.50);
    CHECK(massive.alpha == 32.0);
    CHECK_THROWS_AS(NoiseAssumption::from_name("huge"), std::invalid_argument);
}
