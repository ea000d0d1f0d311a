// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_MLP_HPP
#define LABELNOISE_MLP_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "labelnoise/matrix.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

constexpr double kLogClamp = 1e-12;

inline double safe_log(double x) { return std::log(x < kLogClamp ? kLogClamp : x); }

/// Fully connected network: ReLU hidden layers, per-node logistic outputs.
struct MlpModel {
    std::vector<std::size_t> layer_widths;  // input ... output
    std::vector<Matrix> weights;            // weights[l]: widths[l] x widths[l+1]
    std::vector<Matrix> biases;             // biases[l]: 1 x widths[l+1]

    std::size_t layer_count() const { return weights.size(); }
    std::size_t input_width() const { return layer_widths.front(); }
    std::size_t output_width() const { return layer_widths.back(); }
};

/// Uniform init scaled by 1/sqrt(fan_in), biases zero.
inline MlpModel make_mlp(const std::vector<std::size_t>& widths, SeededRng& init_rng) {
    if (widths.size() < 2) throw std::invalid_argument("make_mlp: need at least two widths");
    MlpModel m;
    m.layer_widths = widths;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Matrix w(widths[l], widths[l + 1]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
        for (double& x : w.data()) x = (2.0 * init_rng.uniform() - 1.0) * bound;
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(1, widths[l + 1]);
    }
    return m;
}

/// Everything the backward pass needs: per-layer pre-activations and
/// activations, logistic outputs p and the normalized distribution q.
struct ForwardTrace {
    std::vector<Matrix> pre_activations;  // one per weight layer
    std::vector<Matrix> activations;      // activations[0] = input batch
    Matrix outputs;                       // logistic p, batch x C
    Matrix probabilities;                 // q = p / row_sum(p), batch x C
};

inline ForwardTrace forward(const MlpModel& model, const Matrix& batch) {
    if (batch.cols() != model.input_width())
        throw std::invalid_argument("forward: batch width " + std::to_string(batch.cols()) +
                                    " != input width " + std::to_string(model.input_width()));
    ForwardTrace t;
    t.activations.push_back(batch);
    const std::size_t L = model.layer_count();
    for (std::size_t l = 0; l < L; ++l) {
        Matrix z = add_bias_row(matmul(t.activations.back(), model.weights[l]), model.biases[l]);
        Matrix a;
        if (l + 1 < L) {
            a = z.map([](double x) { return x > 0.0 ? x : 0.0; });
        } else {
            a = z.map([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
        }
        t.pre_activations.push_back(std::move(z));
        t.activations.push_back(std::move(a));
    }
    t.outputs = t.activations.back();
    t.probabilities = Matrix(t.outputs.rows(), t.outputs.cols());
    for (std::size_t i = 0; i < t.outputs.rows(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < t.outputs.cols(); ++c) s += t.outputs(i, c);
        for (std::size_t c = 0; c < t.outputs.cols(); ++c)
            t.probabilities(i, c) = t.outputs(i, c) / s;
    }
    return t;
}

struct LossSpec {
    double entropy_weight = 0.1;
};

inline void check_label_rows(const Matrix& labels) {
    for (std::size_t i = 0; i < labels.rows(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < labels.cols(); ++c) {
            const double y = labels(i, c);
            if (y < -1e-9 || y > 1.0 + 1e-9)
                throw std::invalid_argument("labels: entry outside [0,1] in row " +
                                            std::to_string(i));
            s += y;
        }
        if (std::abs(s - 1.0) > 1e-6)
            throw std::invalid_argument("labels: row " + std::to_string(i) +
                                        " does not sum to 1");
    }
}

/// Mean over the batch of cross-entropy on q plus entropy_weight times
/// the prediction entropy.
inline double loss(const ForwardTrace& trace, const Matrix& labels, const LossSpec& spec) {
    check_same_shape(trace.probabilities, labels, "loss");
    check_label_rows(labels);
    const Matrix& q = trace.probabilities;
    double total = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) {
        double ce = 0.0, ent = 0.0;
        for (std::size_t c = 0; c < q.cols(); ++c) {
            const double lq = safe_log(q(i, c));
            ce -= labels(i, c) * lq;
            ent -= q(i, c) * lq;
        }
        total += ce + spec.entropy_weight * ent;
    }
    return total / static_cast<double>(q.rows());
}

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;
};

/// Analytic gradient of loss() w.r.t. all weights and biases.
inline Gradients backward(const MlpModel& model, const ForwardTrace& trace, const Matrix& labels,
                          const LossSpec& spec) {
    check_same_shape(trace.probabilities, labels, "backward");
    const std::size_t L = model.layer_count();
    const std::size_t n = labels.rows();
    const std::size_t C = labels.cols();
    const Matrix& p = trace.outputs;
    const Matrix& q = trace.probabilities;

    // d loss / d z at the output layer, through q = p / sum(p) and p = sigmoid(z).
    Matrix delta(n, C);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum_p = 0.0;
        for (std::size_t c = 0; c < C; ++c) row_sum_p += p(i, c);
        double gq_dot_q = 0.0;
        std::vector<double> gq(C);
        for (std::size_t c = 0; c < C; ++c) {
            const double qc = q(i, c) < kLogClamp ? kLogClamp : q(i, c);
            gq[c] = -labels(i, c) / qc - spec.entropy_weight * (safe_log(q(i, c)) + 1.0);
            gq_dot_q += gq[c] * q(i, c);
        }
        for (std::size_t c = 0; c < C; ++c) {
            const double dp = (gq[c] - gq_dot_q) / row_sum_p;
            delta(i, c) = dp * p(i, c) * (1.0 - p(i, c)) / static_cast<double>(n);
        }
    }

    Gradients g;
    g.weights.resize(L);
    g.biases.resize(L);
    for (std::size_t l = L; l-- > 0;) {
        g.weights[l] = matmul(transpose(trace.activations[l]), delta);
        g.biases[l] = col_sums(delta);
        if (l > 0) {
            Matrix prev = matmul(delta, transpose(model.weights[l]));
            const Matrix& z = trace.pre_activations[l - 1];
            for (std::size_t i = 0; i < prev.rows(); ++i)
                for (std::size_t j = 0; j < prev.cols(); ++j)
                    if (z(i, j) <= 0.0) prev(i, j) = 0.0;
            delta = std::move(prev);
        }
    }
    return g;
}

/// Argmax class of each output row.
inline std::vector<std::size_t> predict_classes(const Matrix& probabilities) {
    std::vector<std::size_t> out(probabilities.rows());
    for (std::size_t i = 0; i < probabilities.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < probabilities.cols(); ++c)
            if (probabilities(i, c) > probabilities(i, best)) best = c;
        out[i] = best;
    }
    return out;
}

}  // namespace labelnoise

#endif
