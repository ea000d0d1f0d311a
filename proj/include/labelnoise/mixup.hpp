// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_MIXUP_HPP
#define LABELNOISE_MIXUP_HPP

#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "labelnoise/dataset.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

struct MixupPolicy {
    double alpha_nonoutlier = 0.4;
    double alpha_outlier = 32.0;
};

struct MixProvenance {
    SampleId left = 0, right = 0;
    double lambda = 1.0;
};

struct MixedBatch {
    Matrix features;
    Matrix labels;
    std::vector<MixProvenance> provenance;
};

/// Convex combination of two sample-label pairs with mixing factor lambda.
inline void mixup_pair(const double* x_i, const double* y_i, const double* x_j, const double* y_j,
                       double lambda, std::size_t feat_dim, std::size_t label_dim, double* x_out,
                       double* y_out) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("mixup_pair: lambda outside [0,1]");
    for (std::size_t k = 0; k < feat_dim; ++k)
        x_out[k] = lambda * x_i[k] + (1.0 - lambda) * x_j[k];
    for (std::size_t k = 0; k < label_dim; ++k)
        y_out[k] = lambda * y_i[k] + (1.0 - lambda) * y_j[k];
}

/// Mixup over the given rows: every sample is mixed with a partner drawn
/// uniformly from the non-outlier pool. Outliers get alpha_outlier, others
/// alpha_nonoutlier; with no outliers at all, alpha drops to 0 and the
/// batch passes through unchanged.
inline MixedBatch adapted_mixup(const LabeledDataset& ds, const std::vector<std::size_t>& rows,
                                const std::set<SampleId>& outliers,
                                const std::vector<std::size_t>& nonoutlier_rows,
                                const MixupPolicy& policy, SeededRng& rng) {
    if (!outliers.empty() && nonoutlier_rows.empty())
        throw std::invalid_argument("adapted_mixup: outliers present but non-outlier pool empty");
    MixedBatch out;
    out.features = Matrix(rows.size(), ds.features.cols());
    out.labels = Matrix(rows.size(), ds.labels.cols());
    out.provenance.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        const SampleId id = ds.ids[r];
        double alpha = 0.0;
        if (!outliers.empty())
            alpha = outliers.count(id) ? policy.alpha_outlier : policy.alpha_nonoutlier;
        const double lambda = beta_sample(rng, alpha);
        std::size_t partner = r;
        if (alpha > 0.0)
            partner = nonoutlier_rows[rng.uniform_index(nonoutlier_rows.size())];
        mixup_pair(ds.features.row_ptr(r), ds.labels.row_ptr(r), ds.features.row_ptr(partner),
                   ds.labels.row_ptr(partner), lambda, ds.features.cols(), ds.labels.cols(),
                   out.features.row_ptr(i), out.labels.row_ptr(i));
        out.provenance[i] = {id, ds.ids[partner], lambda};
    }
    return out;
}

/// Classic mixup over the given rows: one alpha for everyone, partners
/// drawn uniformly from the whole row set.
inline MixedBatch plain_mixup(const LabeledDataset& ds, const std::vector<std::size_t>& rows,
                              double alpha, SeededRng& rng) {
    MixedBatch out;
    out.features = Matrix(rows.size(), ds.features.cols());
    out.labels = Matrix(rows.size(), ds.labels.cols());
    out.provenance.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        const double lambda = beta_sample(rng, alpha);
        const std::size_t partner =
            alpha > 0.0 ? rows[rng.uniform_index(rows.size())] : r;
        mixup_pair(ds.features.row_ptr(r), ds.labels.row_ptr(r), ds.features.row_ptr(partner),
                   ds.labels.row_ptr(partner), lambda, ds.features.cols(), ds.labels.cols(),
                   out.features.row_ptr(i), out.labels.row_ptr(i));
        out.provenance[i] = {ds.ids[r], ds.ids[partner], lambda};
    }
    return out;
}

/// Permanently moves stored labels toward the model's predictions:
/// y <- factor * y + (1 - factor) * q.
inline void relabel(LabeledDataset& ds, const std::vector<std::size_t>& rows,
                    const Matrix& predictions, double factor = 0.6) {
    if (factor < 0.0 || factor > 1.0) throw std::invalid_argument("relabel: factor outside [0,1]");
    if (predictions.rows() != rows.size() || predictions.cols() != ds.labels.cols())
        throw std::invalid_argument("relabel: prediction shape mismatch");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (r >= ds.size()) throw std::invalid_argument("relabel: unknown row");
        for (std::size_t c = 0; c < ds.labels.cols(); ++c)
            ds.labels(r, c) = factor * ds.labels(r, c) + (1.0 - factor) * predictions(i, c);
    }
}

}  // namespace labelnoise

#endif
