// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_DATASET_HPP
#define LABELNOISE_DATASET_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/binary_io.hpp"
#include "labelnoise/matrix.hpp"

namespace labelnoise {

using SampleId = std::uint64_t;

/// Feature matrix plus observed soft labels; ground-truth hard labels kept
/// alongside for evaluation when available.
struct LabeledDataset {
    Matrix features;                        // one row per sample
    Matrix labels;                          // soft labels, rows sum to 1
    std::vector<std::size_t> ground_truth;  // empty when unknown
    std::vector<SampleId> ids;
    std::size_t class_count = 0;

    std::size_t size() const { return features.rows(); }
    bool has_ground_truth() const { return !ground_truth.empty(); }

    std::size_t observed_class(std::size_t row) const {
        std::size_t best = 0;
        for (std::size_t c = 1; c < labels.cols(); ++c)
            if (labels(row, c) > labels(row, best)) best = c;
        return best;
    }

    void validate() const {
        if (labels.rows() != features.rows() || ids.size() != features.rows())
            throw std::invalid_argument("LabeledDataset: row counts disagree");
        if (has_ground_truth() && ground_truth.size() != features.rows())
            throw std::invalid_argument("LabeledDataset: ground truth count disagrees");
        if (labels.cols() != class_count)
            throw std::invalid_argument("LabeledDataset: label width != class_count");
    }
};

inline LabeledDataset select_rows(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
    LabeledDataset out;
    out.class_count = ds.class_count;
    out.features = Matrix(rows.size(), ds.features.cols());
    out.labels = Matrix(rows.size(), ds.labels.cols());
    out.ids.reserve(rows.size());
    if (ds.has_ground_truth()) out.ground_truth.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        for (std::size_t c = 0; c < ds.features.cols(); ++c)
            out.features(i, c) = ds.features(r, c);
        for (std::size_t c = 0; c < ds.labels.cols(); ++c) out.labels(i, c) = ds.labels(r, c);
        out.ids.push_back(ds.ids[r]);
        if (ds.has_ground_truth()) out.ground_truth.push_back(ds.ground_truth[r]);
    }
    return out;
}

// Dataset cache container, magic "LNDS" version 1.

inline constexpr char kDatasetMagic[4] = {'L', 'N', 'D', 'S'};
inline constexpr std::uint64_t kDatasetVersion = 1;

inline void save_dataset(const std::string& path, const LabeledDataset& ds) {
    ds.validate();
    auto os = io::open_out(path);
    io::write_magic(os, kDatasetMagic, kDatasetVersion);
    io::write_u64(os, ds.class_count);
    io::write_matrix(os, ds.features);
    io::write_matrix(os, ds.labels);
    io::write_u64(os, ds.ids.size());
    for (auto id : ds.ids) io::write_u64(os, id);
    io::write_u64(os, ds.ground_truth.size());
    for (auto g : ds.ground_truth) io::write_u64(os, g);
}

inline LabeledDataset load_dataset(const std::string& path) {
    auto is = io::open_in(path);
    io::expect_magic(is, kDatasetMagic, kDatasetVersion, path);
    LabeledDataset ds;
    ds.class_count = io::read_u64(is, "class count");
    ds.features = io::read_matrix(is, "features");
    ds.labels = io::read_matrix(is, "labels");
    const std::uint64_t n_ids = io::read_u64(is, "id count");
    for (std::uint64_t i = 0; i < n_ids; ++i) ds.ids.push_back(io::read_u64(is, "id"));
    const std::uint64_t n_gt = io::read_u64(is, "ground truth count");
    for (std::uint64_t i = 0; i < n_gt; ++i)
        ds.ground_truth.push_back(io::read_u64(is, "ground truth"));
    ds.validate();
    return ds;
}

}  // namespace labelnoise

#endif
