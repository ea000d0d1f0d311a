// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_SYNTH_HPP
#define LABELNOISE_SYNTH_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "labelnoise/dataset.hpp"
#include "labelnoise/idx.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

/// Synthetic stand-in for a sensor fault-detection dataset: 30 time steps x
/// 15 sensors per sample. Class 0 is the healthy state (one signal pattern),
/// class 1 unions several fault patterns. Each pattern has its own smooth
/// per-sensor mean curve; samples add Gaussian noise on top.
inline LabeledDataset synth_bdd(std::uint64_t seed, std::size_t n_class0, std::size_t n_class1,
                                std::size_t fault_patterns = 3, std::size_t window_rows = 30,
                                std::size_t sensors = 15, double noise_std = 0.8) {
    if (n_class0 < 4 || n_class1 < 4)
        throw std::invalid_argument("synth_bdd: need at least 4 samples per class");
    SeededRng base(seed);
    SeededRng pattern_rng = base.substream("bdd-patterns");
    SeededRng sample_rng = base.substream("bdd-samples");

    const std::size_t n_patterns = 1 + fault_patterns;
    const std::size_t feat = window_rows * sensors;
    // Pattern mean curves: per sensor a few random sinusoids plus an offset.
    std::vector<std::vector<double>> curves(n_patterns, std::vector<double>(feat));
    for (std::size_t p = 0; p < n_patterns; ++p) {
        for (std::size_t s = 0; s < sensors; ++s) {
            const double offset = pattern_rng.gaussian(0.0, 1.5);
            const double amp1 = pattern_rng.gaussian(0.0, 1.0);
            const double amp2 = pattern_rng.gaussian(0.0, 0.5);
            const double freq1 = 0.5 + pattern_rng.uniform() * 2.0;
            const double freq2 = 2.0 + pattern_rng.uniform() * 4.0;
            const double phase1 = pattern_rng.uniform() * 6.283185307179586;
            const double phase2 = pattern_rng.uniform() * 6.283185307179586;
            for (std::size_t t = 0; t < window_rows; ++t) {
                const double x = static_cast<double>(t) / static_cast<double>(window_rows);
                curves[p][t * sensors + s] = offset + amp1 * std::sin(freq1 * 6.28318 * x + phase1) +
                                             amp2 * std::sin(freq2 * 6.28318 * x + phase2);
            }
        }
    }

    const std::size_t n = n_class0 + n_class1;
    LabeledDataset ds;
    ds.class_count = 2;
    ds.features = Matrix(n, feat);
    ds.labels = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = i < n_class0 ? 0 : 1;
        std::size_t pattern = 0;
        if (cls == 1) pattern = 1 + (i - n_class0) % fault_patterns;
        for (std::size_t k = 0; k < feat; ++k)
            ds.features(i, k) = curves[pattern][k] + sample_rng.gaussian(0.0, noise_std);
        ds.labels(i, cls) = 1.0;
        ds.ground_truth.push_back(cls);
        ds.ids.push_back(i);
    }
    return ds;
}

/// Synthetic digit-image corpus in the same shape as handwritten-digit
/// IDX data: 28x28 grayscale, classes 0..9. Each class has a smooth random
/// prototype image; samples add pixel noise and intensity jitter.
inline RawDigits synth_digits(std::uint64_t seed, std::size_t count, double noise_std = 0.35) {
    SeededRng base(seed);
    // The ten prototypes are fixed constants, independent of the caller's
    // seed: train and test corpora drawn with different seeds must still
    // describe the same ten classes.
    SeededRng proto_rng = SeededRng(0x646967697473ULL).substream("digit-prototypes");
    SeededRng sample_rng = base.substream("digit-samples");

    constexpr std::size_t kSide = 28, kCoarse = 7;
    // Coarse random grids upsampled bilinearly give blob-like prototypes.
    std::vector<std::vector<double>> protos(10, std::vector<double>(kSide * kSide));
    for (std::size_t d = 0; d < 10; ++d) {
        double grid[kCoarse][kCoarse];
        for (auto& row : grid)
            for (double& v : row) v = proto_rng.uniform();
        for (std::size_t y = 0; y < kSide; ++y) {
            for (std::size_t x = 0; x < kSide; ++x) {
                const double gy = static_cast<double>(y) / (kSide - 1) * (kCoarse - 1);
                const double gx = static_cast<double>(x) / (kSide - 1) * (kCoarse - 1);
                const std::size_t y0 = static_cast<std::size_t>(gy), x0 = static_cast<std::size_t>(gx);
                const std::size_t y1 = std::min(y0 + 1, kCoarse - 1);
                const std::size_t x1 = std::min(x0 + 1, kCoarse - 1);
                const double fy = gy - y0, fx = gx - x0;
                const double v =
                    grid[y0][x0] * (1 - fy) * (1 - fx) + grid[y0][x1] * (1 - fy) * fx +
                    grid[y1][x0] * fy * (1 - fx) + grid[y1][x1] * fy * fx;
                // Keep only the bright half of the blob pattern so images
                // are mostly dark background, like handwritten strokes.
                protos[d][y * kSide + x] = v > 0.5 ? (v - 0.5) * 2.0 : 0.0;
            }
        }
    }

    RawDigits out;
    out.image_rows = kSide;
    out.image_cols = kSide;
    out.pixels = Matrix(count, kSide * kSide);
    out.labels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t digit = i % 10;
        const double gain = 0.85 + 0.3 * sample_rng.uniform();
        for (std::size_t k = 0; k < kSide * kSide; ++k) {
            double v = gain * protos[digit][k] + sample_rng.gaussian(0.0, noise_std);
            if (v < 0.0) v = 0.0;
            if (v > 1.0) v = 1.0;
            // Quantize to 8-bit levels so the corpus round-trips exactly
            // through the byte-per-pixel IDX container.
            out.pixels(i, k) = std::round(v * 255.0) / 255.0;
        }
        out.labels[i] = static_cast<std::uint8_t>(digit);
    }
    return out;
}

}  // namespace labelnoise

#endif
