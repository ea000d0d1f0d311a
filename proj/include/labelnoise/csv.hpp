// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_CSV_HPP
#define LABELNOISE_CSV_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "labelnoise/binary_io.hpp"
#include "labelnoise/dataset.hpp"

namespace labelnoise {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw io::FormatError("csv: missing column '" + name + "'");
    }
};

/// Comma-separated values with a header row; no quoting support, dot decimal.
inline CsvTable read_csv(const std::string& path) {
    auto is = io::open_in(path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) throw io::FormatError(path + ": empty file, no header row");
    return table;
}

namespace detail {

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw io::FormatError("csv: non-numeric cell '" + cell + "' at row " +
                              std::to_string(row + 2) + ", column " + std::to_string(col + 1));
    }
}

}  // namespace detail

/// Cuts the table into consecutive non-overlapping windows of window_rows
/// rows over the named sensor columns, flattening each window row-major
/// into one feature vector. A window is labeled faulty if any of its rows
/// has a nonzero value in fault_column. Features are left unstandardized;
/// fit a Standardizer on the training split after splitting.
inline LabeledDataset window_csv(const CsvTable& table,
                                 const std::vector<std::string>& sensor_columns,
                                 const std::string& fault_column,
                                 std::size_t window_rows = 30) {
    if (table.rows.size() % window_rows != 0)
        throw io::FormatError("csv: row count " + std::to_string(table.rows.size()) +
                              " not divisible into windows of " + std::to_string(window_rows));
    std::vector<std::size_t> sensor_idx;
    for (const auto& name : sensor_columns) sensor_idx.push_back(table.column_index(name));
    const std::size_t fault_idx = table.column_index(fault_column);

    const std::size_t n_windows = table.rows.size() / window_rows;
    const std::size_t feat = window_rows * sensor_idx.size();
    LabeledDataset ds;
    ds.class_count = 2;
    ds.features = Matrix(n_windows, feat);
    ds.labels = Matrix(n_windows, 2);
    for (std::size_t w = 0; w < n_windows; ++w) {
        bool faulty = false;
        for (std::size_t t = 0; t < window_rows; ++t) {
            const std::size_t row = w * window_rows + t;
            const auto& cells = table.rows[row];
            if (cells.size() != table.header.size())
                throw io::FormatError("csv: row " + std::to_string(row + 2) + " has " +
                                      std::to_string(cells.size()) + " cells, expected " +
                                      std::to_string(table.header.size()));
            for (std::size_t s = 0; s < sensor_idx.size(); ++s)
                ds.features(w, t * sensor_idx.size() + s) =
                    detail::parse_cell(cells[sensor_idx[s]], row, sensor_idx[s]);
            if (detail::parse_cell(cells[fault_idx], row, fault_idx) != 0.0) faulty = true;
        }
        ds.labels(w, faulty ? 1 : 0) = 1.0;
        ds.ground_truth.push_back(faulty ? 1 : 0);
        ds.ids.push_back(w);
    }
    return ds;
}

}  // namespace labelnoise

#endif
