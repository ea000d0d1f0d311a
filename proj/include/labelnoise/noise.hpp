// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_NOISE_HPP
#define LABELNOISE_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "labelnoise/dataset.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

struct NoiseRecord {
    double noise_ratio = 0.0;
    std::vector<SampleId> flipped;  // sorted by id
    std::uint64_t seed = 0;
};

/// Flips exactly round(ratio * n) uniformly chosen labels to a uniformly
/// chosen different class. Ground truth is preserved. Ratios of 0.5 or more
/// break the framework's base assumption and are rejected.
inline NoiseRecord inject_symmetric_noise(LabeledDataset& ds, double ratio, SeededRng& rng) {
    if (ratio < 0.0 || ratio >= 0.5)
        throw std::invalid_argument("inject_symmetric_noise: ratio must be in [0, 0.5)");
    if (!ds.has_ground_truth())
        throw std::invalid_argument("inject_symmetric_noise: ground truth required");
    NoiseRecord record;
    record.noise_ratio = ratio;
    record.seed = rng.seed();
    const std::size_t n = ds.size();
    const std::size_t n_flips =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
    if (n_flips == 0) return record;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t i = 0; i < n_flips; ++i) {
        const std::size_t r = order[i];
        const std::size_t truth = ds.ground_truth[r];
        std::size_t target = rng.uniform_index(ds.class_count - 1);
        if (target >= truth) target += 1;
        for (std::size_t c = 0; c < ds.class_count; ++c) ds.labels(r, c) = 0.0;
        ds.labels(r, target) = 1.0;
        record.flipped.push_back(ds.ids[r]);
    }
    std::sort(record.flipped.begin(), record.flipped.end());
    return record;
}

/// Random disjoint train/test partition; the test size is
/// floor(test_fraction * n).
inline std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds,
                                                       double test_fraction, SeededRng& rng) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("split: test_fraction must be in (0,1)");
    const std::size_t n = ds.size();
    const std::size_t n_test =
        static_cast<std::size_t>(test_fraction * static_cast<double>(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    std::vector<std::size_t> test_rows(order.begin(), order.begin() + n_test);
    std::vector<std::size_t> train_rows(order.begin() + n_test, order.end());
    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    return {select_rows(ds, train_rows), select_rows(ds, test_rows)};
}

}  // namespace labelnoise

#endif
