// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_METRICS_IO_HPP
#define LABELNOISE_METRICS_IO_HPP

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "labelnoise/binary_io.hpp"
#include "labelnoise/config.hpp"
#include "labelnoise/outlier.hpp"
#include "labelnoise/trainer.hpp"

namespace labelnoise {

using ordered_json = nlohmann::ordered_json;

inline ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["type"] = "meta";
    j["dataset"] = cfg.dataset;
    j["strategy"] = strategy_name(cfg.strategy);
    j["noise_ratio"] = cfg.noise_ratio;
    j["assumed_noise"] = cfg.assumption.name();
    j["seed"] = cfg.seed;
    j["repeats"] = cfg.repeats;
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.effective_batch();
    j["lr"] = cfg.effective_lr();
    j["entropy_weight"] = cfg.entropy_weight;
    j["min_iqr"] = cfg.min_iqr;
    j["hidden_widths"] = cfg.effective_hidden();
    j["oracle_outliers"] = cfg.oracle_outliers;
    j["relabel_all"] = cfg.relabel_all;
    j["relabel_factor"] = cfg.relabel_factor;
    return j;
}

inline ordered_json epoch_to_json(std::size_t repeat, const EpochMetrics& em) {
    ordered_json j;
    j["type"] = "epoch";
    j["repeat"] = repeat;
    j["epoch"] = em.epoch;
    j["train_acc"] = em.train_accuracy;
    j["test_acc"] = em.test_accuracy;
    j["loss"] = em.mean_loss;
    j["outliers"] = em.outliers_total;
    ordered_json per_class = ordered_json::object();
    for (const auto& [c, k] : em.outliers_per_class) per_class[std::to_string(c)] = k;
    j["outliers_per_class"] = per_class;
    j["comp_mislabeled"] = em.comp_mislabeled;
    j["comp_correct"] = em.comp_correctly_labeled;
    j["cumulative_outliers"] = em.cumulative_outliers;
    return j;
}

/// JSON-lines metrics file: one meta record, then one record per
/// (repeat, epoch).
inline void write_metrics(const std::string& path, const ExperimentConfig& cfg,
                          const std::vector<RunMetrics>& runs) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io::FormatError("cannot open metrics file for writing: " + path);
    os << config_to_json(cfg).dump() << "\n";
    for (const auto& run : runs)
        for (const auto& em : run.epochs) os << epoch_to_json(run.repeat, em).dump() << "\n";
}

struct MetricsFile {
    ordered_json meta;
    // records[repeat] = epoch records in order
    std::vector<std::vector<ordered_json>> records;
};

inline MetricsFile read_metrics(const std::string& path) {
    auto is = io::open_in(path);
    MetricsFile mf;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw io::FormatError(path + ": invalid metrics record: " + e.what());
        }
        if (!j.contains("type"))
            throw io::FormatError(path + ": record without 'type' field");
        if (j["type"] == "meta") {
            mf.meta = j;
        } else if (j["type"] == "epoch") {
            const std::size_t repeat = j.at("repeat").get<std::size_t>();
            if (repeat >= mf.records.size()) mf.records.resize(repeat + 1);
            mf.records[repeat].push_back(j);
        } else {
            throw io::FormatError(path + ": unknown record type");
        }
    }
    if (mf.meta.is_null()) throw io::FormatError(path + ": missing meta record");
    return mf;
}

/// JSON-lines outlier-detection trace: one record per (repeat, epoch, class)
/// with whisker bounds and flagged-set composition.
class JsonlOdTrace final : public OdTraceSink {
public:
    explicit JsonlOdTrace(const std::string& path) : os_(path, std::ios::binary) {
        if (!os_) throw io::FormatError("cannot open od-trace file for writing: " + path);
    }

    void record(std::size_t repeat, std::size_t epoch, const OutlierReport& report,
                const std::set<SampleId>& flipped) override {
        for (const auto& wb : report.per_class) {
            ordered_json j;
            j["repeat"] = repeat;
            j["epoch"] = epoch;
            j["class"] = wb.class_id;
            j["p25"] = wb.p25;
            j["p75"] = wb.p75;
            j["iqr"] = wb.iqr;
            j["wh_low"] = wb.wh_low;
            j["wh_up"] = wb.wh_up;
            std::size_t count = 0, mislabeled = 0;
            if (auto it = report.outliers_per_class.find(wb.class_id);
                it != report.outliers_per_class.end())
                count = it->second;
            for (SampleId id : report.outliers)
                if (flipped.count(id)) ++mislabeled;
            j["outliers"] = count;
            j["comp_mislabeled_total"] = mislabeled;
            j["comp_correct_total"] = report.outliers.size() - mislabeled;
            os_ << j.dump() << "\n";
        }
    }

private:
    std::ofstream os_;
};

}  // namespace labelnoise

#endif
