// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_CHECKPOINT_HPP
#define LABELNOISE_CHECKPOINT_HPP

#include <string>

#include "labelnoise/adam.hpp"
#include "labelnoise/binary_io.hpp"
#include "labelnoise/mlp.hpp"

namespace labelnoise {

// Checkpoint container, magic "LNCK" version 1, little-endian u64/f64:
//   layer width list, per-layer weight and bias matrices, full Adam state.
// Round-trips bit-exactly.

inline constexpr char kCheckpointMagic[4] = {'L', 'N', 'C', 'K'};
inline constexpr std::uint64_t kCheckpointVersion = 1;

inline void save_checkpoint(const std::string& path, const MlpModel& model,
                            const AdamState& state) {
    auto os = io::open_out(path);
    io::write_magic(os, kCheckpointMagic, kCheckpointVersion);
    io::write_u64(os, model.layer_widths.size());
    for (auto w : model.layer_widths) io::write_u64(os, w);
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        io::write_matrix(os, model.weights[l]);
        io::write_matrix(os, model.biases[l]);
    }
    io::write_u64(os, state.step);
    io::write_f64(os, state.lr);
    io::write_f64(os, state.beta1);
    io::write_f64(os, state.beta2);
    io::write_f64(os, state.epsilon);
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        io::write_matrix(os, state.m_weights[l]);
        io::write_matrix(os, state.v_weights[l]);
        io::write_matrix(os, state.m_biases[l]);
        io::write_matrix(os, state.v_biases[l]);
    }
}

inline std::pair<MlpModel, AdamState> load_checkpoint(const std::string& path) {
    auto is = io::open_in(path);
    io::expect_magic(is, kCheckpointMagic, kCheckpointVersion, path);
    MlpModel model;
    const std::uint64_t n_widths = io::read_u64(is, "layer widths");
    for (std::uint64_t i = 0; i < n_widths; ++i)
        model.layer_widths.push_back(io::read_u64(is, "layer width"));
    for (std::size_t l = 0; l + 1 < n_widths; ++l) {
        model.weights.push_back(io::read_matrix(is, "weights"));
        model.biases.push_back(io::read_matrix(is, "biases"));
    }
    AdamState state;
    state.step = io::read_u64(is, "adam step");
    state.lr = io::read_f64(is, "adam lr");
    state.beta1 = io::read_f64(is, "adam beta1");
    state.beta2 = io::read_f64(is, "adam beta2");
    state.epsilon = io::read_f64(is, "adam epsilon");
    for (std::size_t l = 0; l + 1 < n_widths; ++l) {
        state.m_weights.push_back(io::read_matrix(is, "adam m"));
        state.v_weights.push_back(io::read_matrix(is, "adam v"));
        state.m_biases.push_back(io::read_matrix(is, "adam mb"));
        state.v_biases.push_back(io::read_matrix(is, "adam vb"));
    }
    return {std::move(model), std::move(state)};
}

}  // namespace labelnoise

#endif
