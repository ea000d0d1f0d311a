// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0

#ifndef LABELNOISE_TRAINER_HPP
#define LABELNOISE_TRAINER_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "labelnoise/adam.hpp"
#include "labelnoise/config.hpp"
#include "labelnoise/gradients.hpp"
#include "labelnoise/idx.hpp"
#include "labelnoise/mixup.hpp"
#include "labelnoise/mlp.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/outlier.hpp"
#include "labelnoise/standardize.hpp"
#include "labelnoise/synth.hpp"

namespace labelnoise {

struct EpochMetrics {
    std::size_t epoch = 0;
    double train_accuracy = 0.0;  // argmax agreement with observed labels
    double test_accuracy = 0.0;   // argmax agreement with ground truth
    double mean_loss = 0.0;
    std::size_t outliers_total = 0;
    std::map<std::size_t, std::size_t> outliers_per_class;
    std::size_t comp_mislabeled = 0;       // flagged samples that are truly flipped
    std::size_t comp_correctly_labeled = 0;
    std::size_t cumulative_outliers = 0;
};

struct RunMetrics {
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    std::vector<EpochMetrics> epochs;
    double final_test_accuracy = 0.0;
};

struct PreparedData {
    LabeledDataset train, test;
    NoiseRecord noise;
};

/// Chunked forward pass returning only the normalized class probabilities.
inline Matrix predict(const MlpModel& model, const Matrix& features) {
    constexpr std::size_t kChunk = 1024;
    Matrix out(features.rows(), model.output_width());
    for (std::size_t start = 0; start < features.rows(); start += kChunk) {
        const std::size_t end = std::min(features.rows(), start + kChunk);
        Matrix batch(end - start, features.cols());
        for (std::size_t i = start; i < end; ++i)
            for (std::size_t c = 0; c < features.cols(); ++c)
                batch(i - start, c) = features(i, c);
        ForwardTrace t = forward(model, batch);
        for (std::size_t i = start; i < end; ++i)
            for (std::size_t c = 0; c < out.cols(); ++c)
                out(i, c) = t.probabilities(i - start, c);
    }
    return out;
}

inline double accuracy_vs_observed(const MlpModel& model, const LabeledDataset& ds) {
    const auto pred = predict_classes(predict(model, ds.features));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (pred[i] == ds.observed_class(i)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

inline double accuracy_vs_truth(const MlpModel& model, const LabeledDataset& ds) {
    const auto pred = predict_classes(predict(model, ds.features));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (pred[i] == ds.ground_truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

/// Builds the train/test pair for one repeat, injecting label noise into
/// the training split only.
inline PreparedData prepare_data(const ExperimentConfig& cfg, SeededRng& repeat_rng) {
    PreparedData out;
    if (cfg.dataset == "synth-digits") {
        SeededRng data_rng = repeat_rng.substream("data");
        out.train = binarize_mnist(synth_digits(data_rng.substream("train").seed(),
                                                cfg.train_count));
        out.test = binarize_mnist(synth_digits(data_rng.substream("test").seed(),
                                               cfg.test_count),
                                  /*id_offset=*/cfg.train_count);
    } else if (cfg.dataset == "synth-bdd") {
        SeededRng data_rng = repeat_rng.substream("data");
        LabeledDataset full = synth_bdd(data_rng.seed(), cfg.bdd_class0, cfg.bdd_class1);
        SeededRng split_rng = repeat_rng.substream("split");
        auto [train, test] = split(full, cfg.test_fraction, split_rng);
        Standardizer std_params;
        std_params.fit(train.features);
        std_params.apply(train.features);
        std_params.apply(test.features);
        out.train = std::move(train);
        out.test = std::move(test);
    } else if (cfg.dataset == "mnist-idx") {
        RawDigits train_raw = load_idx(cfg.data_dir + "/train-images-idx3-ubyte",
                                       cfg.data_dir + "/train-labels-idx1-ubyte");
        RawDigits test_raw = load_idx(cfg.data_dir + "/t10k-images-idx3-ubyte",
                                      cfg.data_dir + "/t10k-labels-idx1-ubyte");
        out.train = binarize_mnist(train_raw);
        out.test = binarize_mnist(test_raw, out.train.size());
        if (cfg.train_count > 0 && cfg.train_count < out.train.size()) {
            SeededRng subset_rng = repeat_rng.substream("subset");
            std::vector<std::size_t> order(out.train.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), subset_rng.engine());
            order.resize(cfg.train_count);
            std::sort(order.begin(), order.end());
            out.train = select_rows(out.train, order);
        }
        if (cfg.test_count > 0 && cfg.test_count < out.test.size()) {
            SeededRng subset_rng = repeat_rng.substream("subset-test");
            std::vector<std::size_t> order(out.test.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), subset_rng.engine());
            order.resize(cfg.test_count);
            std::sort(order.begin(), order.end());
            out.test = select_rows(out.test, order);
        }
    } else {  // cache
        out.train = load_dataset(cfg.train_cache);
        out.test = load_dataset(cfg.test_cache);
    }

    if (cfg.noise_ratio > 0.0) {
        SeededRng noise_rng = repeat_rng.substream("noise");
        out.noise = inject_symmetric_noise(out.train, cfg.noise_ratio, noise_rng);
    }
    return out;
}

/// Optional sink for per-(epoch, class) whisker records.
class OdTraceSink {
public:
    virtual ~OdTraceSink() = default;
    virtual void record(std::size_t repeat, std::size_t epoch, const OutlierReport& report,
                        const std::set<SampleId>& flipped) = 0;
};

/// One full training run (one repeat): per-epoch outlier detection, data
/// modification per strategy, then shuffled mini-batch Adam updates.
inline RunMetrics train_single(const ExperimentConfig& cfg, std::size_t repeat,
                               OdTraceSink* trace = nullptr) {
    SeededRng repeat_rng = SeededRng(cfg.seed).substream("repeat", repeat);
    PreparedData data = prepare_data(cfg, repeat_rng);
    LabeledDataset& train_ds = data.train;
    const std::set<SampleId> flipped(data.noise.flipped.begin(), data.noise.flipped.end());

    std::vector<std::size_t> widths;
    widths.push_back(train_ds.features.cols());
    for (auto w : cfg.effective_hidden()) widths.push_back(w);
    widths.push_back(train_ds.class_count);

    SeededRng init_rng = repeat_rng.substream("init");
    MlpModel model = make_mlp(widths, init_rng);
    AdamState adam = make_adam_state(model, cfg.effective_lr());
    const LossSpec loss_spec{cfg.entropy_weight};
    const std::size_t batch = cfg.effective_batch();
    const std::size_t n = train_ds.size();

    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    RunMetrics run;
    run.repeat = repeat;
    run.seed = repeat_rng.seed();
    std::set<SampleId> cumulative;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        EpochMetrics em;
        em.epoch = epoch;

        std::set<SampleId> current;
        if (cfg.oracle_outliers) {
            current = flipped;
            em.outliers_total = current.size();
            em.comp_mislabeled = current.size();
        } else if (strategy_uses_od(cfg.strategy)) {
            auto summaries = layer_mean_gradients(model, train_ds, all_rows);
            std::vector<ClassifiedSummary> classified;
            classified.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                ClassifiedSummary cs;
                cs.summary = std::move(summaries[i]);
                cs.class_id = train_ds.observed_class(i);
                if (train_ds.has_ground_truth())
                    cs.mislabeled = flipped.count(train_ds.ids[i]) > 0;
                classified.push_back(std::move(cs));
            }
            OutlierReport report =
                detect_outliers(classified, cfg.min_iqr, cfg.assumption.upper_threshold);
            current.insert(report.outliers.begin(), report.outliers.end());
            em.outliers_total = report.outliers.size();
            em.outliers_per_class = report.outliers_per_class;
            if (report.composition) {
                em.comp_mislabeled = report.composition->mislabeled;
                em.comp_correctly_labeled = report.composition->correctly_labeled;
            }
            if (trace) trace->record(repeat, epoch, report, flipped);
        }
        cumulative.insert(current.begin(), current.end());
        em.cumulative_outliers = cumulative.size();

        const std::set<SampleId>& active = (cfg.strategy == Strategy::MixAllOutlier ||
                                            cfg.strategy == Strategy::MixAllOutlierRelabel ||
                                            cfg.oracle_outliers)
                                               ? cumulative
                                               : current;

        if (cfg.strategy == Strategy::MixAllOutlierRelabel && !cfg.oracle_outliers) {
            std::vector<std::size_t> target_rows;
            for (std::size_t i = 0; i < n; ++i)
                if (cfg.relabel_all || cumulative.count(train_ds.ids[i]))
                    target_rows.push_back(i);
            if (!target_rows.empty()) {
                LabeledDataset targets = select_rows(train_ds, target_rows);
                Matrix q = predict(model, targets.features);
                relabel(train_ds, target_rows, q, cfg.relabel_factor);
            }
        }

        // Epoch training material.
        const Matrix* feats = &train_ds.features;
        const Matrix* labels = &train_ds.labels;
        MixedBatch mixed;
        LabeledDataset reduced;
        if (cfg.strategy == Strategy::Mixup) {
            SeededRng mix_rng = repeat_rng.substream("mixup", epoch);
            mixed = plain_mixup(train_ds, all_rows, cfg.assumption.alpha, mix_rng);
            feats = &mixed.features;
            labels = &mixed.labels;
        } else if (cfg.strategy == Strategy::DeleteOutlier && !cfg.oracle_outliers) {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < n; ++i)
                if (!active.count(train_ds.ids[i])) keep.push_back(i);
            reduced = select_rows(train_ds, keep);
            feats = &reduced.features;
            labels = &reduced.labels;
        } else if (cfg.oracle_outliers || cfg.strategy == Strategy::MixOutlier ||
                   cfg.strategy == Strategy::MixAllOutlier ||
                   cfg.strategy == Strategy::MixAllOutlierRelabel) {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < n; ++i)
                if (!active.count(train_ds.ids[i])) pool.push_back(i);
            MixupPolicy policy;
            if (cfg.oracle_outliers) policy = {0.0, 32.0};
            SeededRng mix_rng = repeat_rng.substream("mixup", epoch);
            mixed = adapted_mixup(train_ds, all_rows, active, pool, policy, mix_rng);
            feats = &mixed.features;
            labels = &mixed.labels;
        }

        // Shuffled mini-batch Adam updates.
        SeededRng shuffle_rng = repeat_rng.substream("shuffle", epoch);
        std::vector<std::size_t> order(feats->rows());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(order.size(), start + batch);
            Matrix bx(end - start, feats->cols());
            Matrix by(end - start, labels->cols());
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t r = order[i];
                for (std::size_t c = 0; c < feats->cols(); ++c) bx(i - start, c) = (*feats)(r, c);
                for (std::size_t c = 0; c < labels->cols(); ++c)
                    by(i - start, c) = (*labels)(r, c);
            }
            ForwardTrace t = forward(model, bx);
            loss_sum += loss(t, by, loss_spec);
            Gradients g = backward(model, t, by, loss_spec);
            adam_step(model, g, adam);
            ++n_batches;
        }
        em.mean_loss = n_batches ? loss_sum / static_cast<double>(n_batches) : 0.0;
        em.train_accuracy = accuracy_vs_observed(model, train_ds);
        em.test_accuracy = accuracy_vs_truth(model, data.test);
        run.epochs.push_back(std::move(em));
    }
    run.final_test_accuracy = run.epochs.back().test_accuracy;
    return run;
}

/// All repeats of one configuration.
inline std::vector<RunMetrics> train(const ExperimentConfig& cfg, OdTraceSink* trace = nullptr) {
    cfg.validate();
    std::vector<RunMetrics> runs;
    for (std::size_t r = 0; r < cfg.repeats; ++r) runs.push_back(train_single(cfg, r, trace));
    return runs;
}

}  // namespace labelnoise

#endif
