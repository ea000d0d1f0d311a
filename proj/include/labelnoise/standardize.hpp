// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_STANDARDIZE_HPP
#define LABELNOISE_STANDARDIZE_HPP

#include <cmath>
#include <vector>

#include "labelnoise/matrix.hpp"

namespace labelnoise {

/// Per-column standardization. Fit on the training split, apply unchanged
/// to any other split. Zero-variance columns keep std 1 and map to zero.
struct Standardizer {
    std::vector<double> means, stds;

    void fit(const Matrix& features) {
        const std::size_t n = features.rows(), d = features.cols();
        means.assign(d, 0.0);
        stds.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) means[j] += features(i, j);
        for (double& m : means) m /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double dlt = features(i, j) - means[j];
                stds[j] += dlt * dlt;
            }
        for (double& s : stds) {
            s = std::sqrt(s / static_cast<double>(n));
            if (s == 0.0) s = 1.0;
        }
    }

    void apply(Matrix& features) const {
        for (std::size_t i = 0; i < features.rows(); ++i)
            for (std::size_t j = 0; j < features.cols(); ++j)
                features(i, j) = (features(i, j) - means[j]) / stds[j];
    }
};

}  // namespace labelnoise

#endif
