// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_CONFIG_HPP
#define LABELNOISE_CONFIG_HPP

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/outlier.hpp"

namespace labelnoise {

enum class Strategy {
    Erm,
    Mixup,
    DeleteOutlier,
    MixOutlier,
    MixAllOutlier,
    MixAllOutlierRelabel,
};

inline Strategy strategy_from_name(const std::string& name) {
    if (name == "erm") return Strategy::Erm;
    if (name == "mixup") return Strategy::Mixup;
    if (name == "delete-outlier") return Strategy::DeleteOutlier;
    if (name == "mix-outlier") return Strategy::MixOutlier;
    if (name == "mix-all-outlier") return Strategy::MixAllOutlier;
    if (name == "mix-all-outlier-relabel") return Strategy::MixAllOutlierRelabel;
    throw std::invalid_argument("unknown strategy: " + name);
}

inline const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Erm: return "erm";
        case Strategy::Mixup: return "mixup";
        case Strategy::DeleteOutlier: return "delete-outlier";
        case Strategy::MixOutlier: return "mix-outlier";
        case Strategy::MixAllOutlier: return "mix-all-outlier";
        default: return "mix-all-outlier-relabel";
    }
}

inline bool strategy_uses_od(Strategy s) {
    return s == Strategy::DeleteOutlier || s == Strategy::MixOutlier ||
           s == Strategy::MixAllOutlier || s == Strategy::MixAllOutlierRelabel;
}

struct ExperimentConfig {
    // Data source: "synth-digits", "synth-bdd", "mnist-idx" (IDX files in
    // data_dir), or "cache" (pre-built train/test dataset containers).
    std::string dataset = "synth-digits";
    std::string data_dir;
    std::string train_cache, test_cache;
    std::size_t train_count = 4000;   // synth-digits
    std::size_t test_count = 1000;    // synth-digits
    std::size_t bdd_class0 = 623;     // synth-bdd
    std::size_t bdd_class1 = 624;
    double test_fraction = 0.2;       // synth-bdd / csv

    std::vector<std::size_t> hidden_widths;  // empty = dataset default
    double lr = 0.0;                         // 0 = dataset default
    std::size_t batch_size = 0;              // 0 = dataset default
    std::size_t epochs = 20;
    double entropy_weight = 0.1;
    double min_iqr = 0.0001;

    double noise_ratio = 0.0;
    Strategy strategy = Strategy::Erm;
    NoiseAssumption assumption = NoiseAssumption::massive();
    std::uint64_t seed = 1;
    std::size_t repeats = 5;

    bool oracle_outliers = false;  // use the true mislabeled set instead of OD
    bool relabel_all = false;      // relabel every sample, not just outliers
    double relabel_factor = 0.6;

    std::string metrics_out;
    std::string od_trace_out;

    bool is_image_dataset() const { return dataset == "synth-digits" || dataset == "mnist-idx"; }

    std::vector<std::size_t> effective_hidden() const {
        if (!hidden_widths.empty()) return hidden_widths;
        if (is_image_dataset()) return {128, 32, 10};
        return {256, 128, 64, 16};
    }
    double effective_lr() const { return lr > 0.0 ? lr : (is_image_dataset() ? 0.001 : 0.0001); }
    std::size_t effective_batch() const {
        return batch_size > 0 ? batch_size : (is_image_dataset() ? 64 : 16);
    }

    void validate() const {
        if (noise_ratio < 0.0 || noise_ratio >= 0.5)
            throw std::invalid_argument("config: noise_ratio must be in [0, 0.5)");
        if (epochs == 0) throw std::invalid_argument("config: epochs must be positive");
        if (repeats == 0) throw std::invalid_argument("config: repeats must be positive");
        if (min_iqr <= 0.0) throw std::invalid_argument("config: min_iqr must be positive");
        if (entropy_weight < 0.0)
            throw std::invalid_argument("config: entropy_weight must be nonnegative");
        if (relabel_factor < 0.0 || relabel_factor > 1.0)
            throw std::invalid_argument("config: relabel_factor must be in [0,1]");
        if (dataset != "synth-digits" && dataset != "synth-bdd" && dataset != "mnist-idx" &&
            dataset != "cache")
            throw std::invalid_argument("config: unknown dataset '" + dataset + "'");
        if (dataset == "mnist-idx" && data_dir.empty())
            throw std::invalid_argument("config: mnist-idx needs data_dir");
        if (dataset == "cache" && (train_cache.empty() || test_cache.empty()))
            throw std::invalid_argument("config: cache dataset needs train_cache and test_cache");
    }
};

inline std::vector<std::size_t> parse_width_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoul(tok));
    return out;
}

}  // namespace labelnoise

#endif
