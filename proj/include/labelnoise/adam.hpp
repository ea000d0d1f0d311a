// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_ADAM_HPP
#define LABELNOISE_ADAM_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "labelnoise/mlp.hpp"

namespace labelnoise {

struct AdamState {
    std::vector<Matrix> m_weights, v_weights;
    std::vector<Matrix> m_biases, v_biases;
    std::size_t step = 0;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

inline AdamState make_adam_state(const MlpModel& model, double lr) {
    AdamState s;
    s.lr = lr;
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        s.m_weights.emplace_back(model.weights[l].rows(), model.weights[l].cols());
        s.v_weights.emplace_back(model.weights[l].rows(), model.weights[l].cols());
        s.m_biases.emplace_back(1, model.biases[l].cols());
        s.v_biases.emplace_back(1, model.biases[l].cols());
    }
    return s;
}

namespace detail {

inline void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                        std::vector<double>& m, std::vector<double>& v, const AdamState& s,
                        double bc1, double bc2) {
    for (std::size_t i = 0; i < param.size(); ++i) {
        m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
        v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        param[i] -= s.lr * mhat / (std::sqrt(vhat) + s.epsilon);
    }
}

}  // namespace detail

/// One bias-corrected Adam step over all weights and biases.
inline void adam_step(MlpModel& model, const Gradients& grads, AdamState& state) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        detail::adam_update(model.weights[l].data(), grads.weights[l].data(),
                            state.m_weights[l].data(), state.v_weights[l].data(), state, bc1, bc2);
        detail::adam_update(model.biases[l].data(), grads.biases[l].data(),
                            state.m_biases[l].data(), state.v_biases[l].data(), state, bc1, bc2);
    }
}

}  // namespace labelnoise

#endif
