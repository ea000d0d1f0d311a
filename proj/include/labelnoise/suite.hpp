// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_SUITE_HPP
#define LABELNOISE_SUITE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/report.hpp"
#include "labelnoise/trainer.hpp"

namespace labelnoise {

struct SuiteCell {
    ExperimentConfig config;
    SummaryRow summary;
    bool failed = false;
    std::string error;
};

struct SuiteResult {
    std::vector<SuiteCell> cells;
    std::vector<SummaryRow> summary() const {
        std::vector<SummaryRow> rows;
        for (const auto& c : cells)
            if (!c.failed) rows.push_back(c.summary);
        return rows;
    }
};

/// Expands strategies x noise ratios x assumed levels into one config per
/// cell, sharing every other setting from the base config.
inline std::vector<ExperimentConfig> make_grid(const ExperimentConfig& base,
                                               const std::vector<Strategy>& strategies,
                                               const std::vector<double>& noise_ratios,
                                               const std::vector<NoiseAssumption>& assumptions) {
    if (strategies.empty()) throw std::invalid_argument("make_grid: empty strategy list");
    if (noise_ratios.empty()) throw std::invalid_argument("make_grid: empty noise ratio list");
    if (assumptions.empty()) throw std::invalid_argument("make_grid: empty assumption list");
    std::vector<ExperimentConfig> grid;
    for (const auto& s : strategies)
        for (double nr : noise_ratios)
            for (const auto& a : assumptions) {
                ExperimentConfig cfg = base;
                cfg.strategy = s;
                cfg.noise_ratio = nr;
                cfg.assumption = a;
                grid.push_back(cfg);
            }
    return grid;
}

/// Runs every grid cell; a failing cell is recorded and the suite continues.
inline SuiteResult run_suite(const std::vector<ExperimentConfig>& grid) {
    if (grid.empty()) throw std::invalid_argument("run_suite: empty grid");
    SuiteResult result;
    for (const auto& cfg : grid) {
        SuiteCell cell;
        cell.config = cfg;
        try {
            const auto runs = train(cfg);
            std::vector<double> finals;
            for (const auto& r : runs) finals.push_back(r.final_test_accuracy);
            cell.summary.strategy = strategy_name(cfg.strategy);
            cell.summary.noise_ratio = cfg.noise_ratio;
            cell.summary.assumed = cfg.assumption.name();
            cell.summary.mean_acc = mean(finals);
            cell.summary.std_acc = stddev_population(finals);
            cell.summary.repeats = finals.size();
            if (!cfg.metrics_out.empty()) write_metrics(cfg.metrics_out, cfg, runs);
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));
    }
    return result;
}

}  // namespace labelnoise

#endif
