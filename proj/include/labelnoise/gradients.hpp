// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_GRADIENTS_HPP
#define LABELNOISE_GRADIENTS_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "labelnoise/dataset.hpp"
#include "labelnoise/mlp.hpp"

namespace labelnoise {

/// Per-sample layer-mean weight gradient of the cross-entropy loss,
/// hard argmax label, biases excluded.
struct GradientSummary {
    SampleId sample_id = 0;
    std::vector<double> layer_means;  // one entry per weight layer
};

/// Layer-mean summaries for the given dataset rows.
///
/// The mean over all entries of a dense layer's per-sample weight gradient
/// (an outer product of the incoming activation and the back-propagated
/// delta) equals the product of the two vector means, so only the delta
/// vectors are propagated; full weight-gradient matrices are never formed.
inline std::vector<GradientSummary> layer_mean_gradients(const MlpModel& model,
                                                         const LabeledDataset& dataset,
                                                         const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw std::invalid_argument("layer_mean_gradients: empty row set");
    const std::size_t L = model.layer_count();
    const std::size_t C = model.output_width();
    std::vector<GradientSummary> out;
    out.reserve(rows.size());

    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < rows.size(); start += kChunk) {
        const std::size_t end = std::min(rows.size(), start + kChunk);
        const std::size_t n = end - start;
        Matrix batch(n, dataset.features.cols());
        std::vector<std::size_t> hard(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = rows[start + i];
            for (std::size_t c = 0; c < batch.cols(); ++c)
                batch(i, c) = dataset.features(r, c);
            hard[i] = dataset.observed_class(r);
        }
        ForwardTrace trace = forward(model, batch);

        // Per-sample CE delta at the output pre-activations (no batch mean).
        const Matrix& p = trace.outputs;
        const Matrix& q = trace.probabilities;
        Matrix delta(n, C);
        for (std::size_t i = 0; i < n; ++i) {
            double row_sum_p = 0.0;
            for (std::size_t c = 0; c < C; ++c) row_sum_p += p(i, c);
            double gq_dot_q = 0.0;
            std::vector<double> gq(C);
            for (std::size_t c = 0; c < C; ++c) {
                const double qc = q(i, c) < kLogClamp ? kLogClamp : q(i, c);
                gq[c] = (c == hard[i]) ? -1.0 / qc : 0.0;
                gq_dot_q += gq[c] * q(i, c);
            }
            for (std::size_t c = 0; c < C; ++c)
                delta(i, c) = (gq[c] - gq_dot_q) / row_sum_p * p(i, c) * (1.0 - p(i, c));
        }

        std::vector<std::vector<double>> means(n, std::vector<double>(L));
        for (std::size_t l = L; l-- > 0;) {
            const Matrix& act = trace.activations[l];
            for (std::size_t i = 0; i < n; ++i) {
                double am = 0.0, dm = 0.0;
                for (std::size_t j = 0; j < act.cols(); ++j) am += act(i, j);
                for (std::size_t j = 0; j < delta.cols(); ++j) dm += delta(i, j);
                means[i][l] = (am / static_cast<double>(act.cols())) *
                              (dm / static_cast<double>(delta.cols()));
            }
            if (l > 0) {
                Matrix prev = matmul(delta, transpose(model.weights[l]));
                const Matrix& z = trace.pre_activations[l - 1];
                for (std::size_t i = 0; i < prev.rows(); ++i)
                    for (std::size_t j = 0; j < prev.cols(); ++j)
                        if (z(i, j) <= 0.0) prev(i, j) = 0.0;
                delta = std::move(prev);
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            out.push_back({dataset.ids[rows[start + i]], std::move(means[i])});
    }
    return out;
}

}  // namespace labelnoise

#endif
