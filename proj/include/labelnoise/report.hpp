// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_REPORT_HPP
#define LABELNOISE_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "labelnoise/metrics_io.hpp"
#include "labelnoise/stats.hpp"

namespace labelnoise {

struct SummaryRow {
    std::string strategy;
    double noise_ratio = 0.0;
    std::string assumed;
    double mean_acc = 0.0;
    double std_acc = 0.0;  // population std
    std::size_t repeats = 0;
};

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline SummaryRow summarize(const MetricsFile& mf) {
    SummaryRow row;
    row.strategy = mf.meta.at("strategy").get<std::string>();
    row.noise_ratio = mf.meta.at("noise_ratio").get<double>();
    row.assumed = mf.meta.at("assumed_noise").get<std::string>();
    std::vector<double> finals;
    for (const auto& repeat : mf.records) {
        if (repeat.empty()) continue;
        finals.push_back(repeat.back().at("test_acc").get<double>());
    }
    if (finals.empty()) throw io::FormatError("metrics file holds no epoch records");
    row.mean_acc = mean(finals);
    row.std_acc = stddev_population(finals);
    row.repeats = finals.size();
    return row;
}

inline void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io::FormatError("cannot open summary file for writing: " + path);
    os << "strategy,noise_ratio,assumed,mean_acc,std_acc,repeats\n";
    for (const auto& r : rows)
        os << r.strategy << "," << format_double(r.noise_ratio) << "," << r.assumed << ","
           << format_double(r.mean_acc) << "," << format_double(r.std_acc) << "," << r.repeats
           << "\n";
}

/// Plot-ready per-epoch series: one CSV row per (repeat, epoch).
inline void write_series_csv(const std::string& path, const std::vector<MetricsFile>& files) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io::FormatError("cannot open series file for writing: " + path);
    os << "strategy,noise_ratio,assumed,repeat,epoch,train_acc,test_acc,loss,outliers,"
          "cumulative_outliers,comp_mislabeled,comp_correct\n";
    for (const auto& mf : files) {
        const std::string strategy = mf.meta.at("strategy").get<std::string>();
        const std::string ratio = format_double(mf.meta.at("noise_ratio").get<double>());
        const std::string assumed = mf.meta.at("assumed_noise").get<std::string>();
        for (std::size_t r = 0; r < mf.records.size(); ++r) {
            for (const auto& rec : mf.records[r]) {
                os << strategy << "," << ratio << "," << assumed << "," << r << ","
                   << rec.at("epoch").get<std::size_t>() << ","
                   << format_double(rec.at("train_acc").get<double>()) << ","
                   << format_double(rec.at("test_acc").get<double>()) << ","
                   << format_double(rec.at("loss").get<double>()) << ","
                   << rec.at("outliers").get<std::size_t>() << ","
                   << rec.at("cumulative_outliers").get<std::size_t>() << ","
                   << rec.at("comp_mislabeled").get<std::size_t>() << ","
                   << rec.at("comp_correct").get<std::size_t>() << "\n";
            }
        }
    }
}

/// Reads metrics files and emits the summary table plus per-epoch series.
inline std::vector<SummaryRow> report(const std::vector<std::string>& metrics_paths,
                                      const std::string& summary_path,
                                      const std::string& series_path = "") {
    std::vector<MetricsFile> files;
    for (const auto& p : metrics_paths) files.push_back(read_metrics(p));
    std::vector<SummaryRow> rows;
    for (const auto& mf : files) rows.push_back(summarize(mf));
    if (!summary_path.empty()) write_summary_csv(summary_path, rows);
    if (!series_path.empty()) write_series_csv(series_path, files);
    return rows;
}

}  // namespace labelnoise

#endif
