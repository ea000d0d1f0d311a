// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_OUTLIER_HPP
#define LABELNOISE_OUTLIER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/gradients.hpp"
#include "labelnoise/stats.hpp"

namespace labelnoise {

/// Coarse prior on the label noise level. The three rows are fixed:
/// (Little, 10%, 0.4), (Medium, 30%, 8), (Massive, 50%, 32).
struct NoiseAssumption {
    enum class Level { Little, Medium, Massive };
    Level level = Level::Massive;
    double upper_threshold = 0.50;
    double alpha = 32.0;

    static NoiseAssumption little() { return {Level::Little, 0.10, 0.4}; }
    static NoiseAssumption medium() { return {Level::Medium, 0.30, 8.0}; }
    static NoiseAssumption massive() { return {Level::Massive, 0.50, 32.0}; }

    static NoiseAssumption from_name(const std::string& name) {
        if (name == "little") return little();
        if (name == "medium") return medium();
        if (name == "massive") return massive();
        throw std::invalid_argument("unknown noise assumption: " + name);
    }

    const char* name() const {
        switch (level) {
            case Level::Little: return "little";
            case Level::Medium: return "medium";
            default: return "massive";
        }
    }
};

/// Per-class, per-layer whisker interval around the interquartile range.
struct WhiskerBounds {
    std::size_t class_id = 0;
    std::vector<double> p25, p75, iqr;  // iqr is post-clamp
    std::vector<double> wh_low, wh_up;
};

struct OutlierComposition {
    std::size_t mislabeled = 0;
    std::size_t correctly_labeled = 0;
};

struct OutlierReport {
    std::vector<SampleId> outliers;              // sorted by id
    std::vector<SampleId> consistent;            // sorted by id
    std::map<SampleId, double> deviation_score;  // per flagged sample
    std::vector<WhiskerBounds> per_class;        // classes with >= 4 samples
    std::map<std::size_t, std::size_t> outliers_per_class;
    std::optional<OutlierComposition> composition;
    std::vector<std::string> warnings;
};

struct ClassifiedSummary {
    GradientSummary summary;
    std::size_t class_id = 0;
    // Observed label disagrees with ground truth; unset when truth is unknown.
    std::optional<bool> mislabeled;
};

/// Box-whisker outlier detection over per-class layer-mean gradient
/// distributions. IQR is clamped from below by min_iqr; per class, at most
/// ceil(cap_fraction * class size) samples are flagged, keeping the highest
/// normalized whisker exceedance (ties broken by sample id).
inline OutlierReport detect_outliers(const std::vector<ClassifiedSummary>& summaries,
                                     double min_iqr, double cap_fraction) {
    if (min_iqr <= 0.0) throw std::invalid_argument("detect_outliers: min_iqr must be > 0");
    if (cap_fraction <= 0.0 || cap_fraction > 0.5)
        throw std::invalid_argument("detect_outliers: cap_fraction must be in (0, 0.5]");

    std::map<std::size_t, std::vector<const ClassifiedSummary*>> by_class;
    for (const auto& s : summaries) by_class[s.class_id].push_back(&s);

    OutlierReport report;
    std::set<SampleId> flagged;
    bool any_truth = false, all_truth = true;
    for (const auto& s : summaries) {
        if (s.mislabeled.has_value()) any_truth = true;
        else all_truth = false;
    }

    for (auto& [class_id, members] : by_class) {
        if (members.size() < 4) {
            report.warnings.push_back("class " + std::to_string(class_id) + " has only " +
                                      std::to_string(members.size()) +
                                      " samples; whiskers skipped");
            continue;
        }
        const std::size_t L = members.front()->summary.layer_means.size();
        WhiskerBounds wb;
        wb.class_id = class_id;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<double> vals;
            vals.reserve(members.size());
            for (const auto* m : members) vals.push_back(m->summary.layer_means[l]);
            const double p25 = percentile(vals, 0.25);
            const double p75 = percentile(vals, 0.75);
            const double iqr = std::max(p75 - p25, min_iqr);
            wb.p25.push_back(p25);
            wb.p75.push_back(p75);
            wb.iqr.push_back(iqr);
            wb.wh_low.push_back(p25 - 1.5 * iqr);
            wb.wh_up.push_back(p75 + 1.5 * iqr);
        }

        // Raw outliers with their normalized exceedance scores.
        std::vector<std::pair<double, SampleId>> raw;
        for (const auto* m : members) {
            double score = 0.0;
            bool outside = false;
            for (std::size_t l = 0; l < L; ++l) {
                const double v = m->summary.layer_means[l];
                double excess = 0.0;
                if (v < wb.wh_low[l]) excess = wb.wh_low[l] - v;
                else if (v > wb.wh_up[l]) excess = v - wb.wh_up[l];
                if (excess > 0.0) {
                    outside = true;
                    score = std::max(score, excess / wb.iqr[l]);
                }
            }
            if (outside) raw.emplace_back(score, m->summary.sample_id);
        }
        std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        const std::size_t cap = static_cast<std::size_t>(
            std::ceil(cap_fraction * static_cast<double>(members.size())));
        if (raw.size() > cap) raw.resize(cap);

        for (const auto& [score, id] : raw) {
            flagged.insert(id);
            report.deviation_score[id] = score;
        }
        report.outliers_per_class[class_id] = raw.size();
        report.per_class.push_back(std::move(wb));
    }

    if (any_truth && all_truth) report.composition = OutlierComposition{};
    for (const auto& s : summaries) {
        const SampleId id = s.summary.sample_id;
        if (flagged.count(id)) {
            report.outliers.push_back(id);
            if (report.composition) {
                if (*s.mislabeled) report.composition->mislabeled += 1;
                else report.composition->correctly_labeled += 1;
            }
        } else {
            report.consistent.push_back(id);
        }
    }
    std::sort(report.outliers.begin(), report.outliers.end());
    std::sort(report.consistent.begin(), report.consistent.end());
    return report;
}

}  // namespace labelnoise

#endif
