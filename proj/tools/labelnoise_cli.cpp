// labelnoise: robust training under label noise
// SPDX-License-Identifier: Apache-2.0
//
// Command-line harness: data generation, noise injection, training runs,
// experiment grids, outlier-detection traces and report tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "labelnoise/labelnoise.hpp"

namespace ln = labelnoise;

namespace {

struct CommonTrainOptions {
    ln::ExperimentConfig cfg;
    std::string strategy = "erm";
    std::string assumed = "massive";
    std::string hidden;
};

void add_train_options(CLI::App* cmd, CommonTrainOptions& opt, bool required) {
    cmd->set_config("--config");
    auto* strategy =
        cmd->add_option("--strategy", opt.strategy,
                        "erm|mixup|delete-outlier|mix-outlier|mix-all-outlier|"
                        "mix-all-outlier-relabel");
    auto* seed = cmd->add_option("--seed", opt.cfg.seed, "base RNG seed");
    auto* repeats = cmd->add_option("--repeats", opt.cfg.repeats, "number of repeats");
    auto* ratio = cmd->add_option("--noise-ratio", opt.cfg.noise_ratio,
                                  "symmetric label noise ratio in [0,0.5)");
    auto* assumed = cmd->add_option("--assumed-noise", opt.assumed, "little|medium|massive");
    if (required) {
        strategy->required();
        seed->required();
        repeats->required();
        ratio->required();
        assumed->required();
    }
    cmd->add_option("--dataset", opt.cfg.dataset, "synth-digits|synth-bdd|mnist-idx|cache");
    cmd->add_option("--data-dir", opt.cfg.data_dir, "IDX directory for mnist-idx");
    cmd->add_option("--train-cache", opt.cfg.train_cache, "training dataset container");
    cmd->add_option("--test-cache", opt.cfg.test_cache, "test dataset container");
    cmd->add_option("--train-count", opt.cfg.train_count, "training subset size");
    cmd->add_option("--test-count", opt.cfg.test_count, "test subset size");
    cmd->add_option("--bdd-class0", opt.cfg.bdd_class0, "healthy samples (synth-bdd)");
    cmd->add_option("--bdd-class1", opt.cfg.bdd_class1, "faulty samples (synth-bdd)");
    cmd->add_option("--test-fraction", opt.cfg.test_fraction, "test split fraction");
    cmd->add_option("--hidden-widths", opt.hidden, "comma-separated hidden layer widths");
    cmd->add_option("--lr", opt.cfg.lr, "Adam learning rate (0 = dataset default)");
    cmd->add_option("--batch-size", opt.cfg.batch_size, "mini-batch size (0 = dataset default)");
    cmd->add_option("--epochs", opt.cfg.epochs, "training epochs");
    cmd->add_option("--entropy-weight", opt.cfg.entropy_weight,
                    "weight of the prediction-entropy regularizer");
    cmd->add_option("--min-iqr", opt.cfg.min_iqr, "lower clamp for the whisker IQR");
    cmd->add_flag("--oracle-outliers", opt.cfg.oracle_outliers,
                  "use the true mislabeled set instead of detection");
    cmd->add_flag("--relabel-all", opt.cfg.relabel_all,
                  "relabel every sample instead of outliers only");
    cmd->add_option("--relabel-factor", opt.cfg.relabel_factor, "label/prediction mix factor");
    cmd->add_option("--metrics-out", opt.cfg.metrics_out, "metrics JSONL output path");
    cmd->add_option("--od-trace-out", opt.cfg.od_trace_out, "OD trace JSONL output path");
}

ln::ExperimentConfig finalize(CommonTrainOptions& opt) {
    opt.cfg.strategy = ln::strategy_from_name(opt.strategy);
    opt.cfg.assumption = ln::NoiseAssumption::from_name(opt.assumed);
    if (!opt.hidden.empty()) opt.cfg.hidden_widths = ln::parse_width_list(opt.hidden);
    opt.cfg.validate();
    return opt.cfg;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

int cmd_generate_data(const std::string& dataset, const std::string& out_dir,
                      std::uint64_t seed, std::size_t train_count, std::size_t test_count,
                      std::size_t bdd_class0, std::size_t bdd_class1, double test_fraction,
                      bool emit_idx) {
    if (dataset == "synth-digits") {
        ln::RawDigits train_raw = ln::synth_digits(ln::SeededRng(seed).substream("train").seed(),
                                                   train_count);
        ln::RawDigits test_raw = ln::synth_digits(ln::SeededRng(seed).substream("test").seed(),
                                                  test_count);
        if (emit_idx) {
            ln::save_idx(out_dir + "/train-images-idx3-ubyte", out_dir + "/train-labels-idx1-ubyte",
                         train_raw.pixels, train_raw.labels, train_raw.image_rows,
                         train_raw.image_cols);
            ln::save_idx(out_dir + "/t10k-images-idx3-ubyte", out_dir + "/t10k-labels-idx1-ubyte",
                         test_raw.pixels, test_raw.labels, test_raw.image_rows,
                         test_raw.image_cols);
        }
        ln::save_dataset(out_dir + "/train.lnds", ln::binarize_mnist(train_raw));
        ln::save_dataset(out_dir + "/test.lnds",
                         ln::binarize_mnist(test_raw, /*id_offset=*/train_count));
    } else if (dataset == "synth-bdd") {
        ln::LabeledDataset full = ln::synth_bdd(seed, bdd_class0, bdd_class1);
        ln::SeededRng split_rng = ln::SeededRng(seed).substream("split");
        auto [train, test] = ln::split(full, test_fraction, split_rng);
        ln::Standardizer std_params;
        std_params.fit(train.features);
        std_params.apply(train.features);
        std_params.apply(test.features);
        ln::save_dataset(out_dir + "/train.lnds", train);
        ln::save_dataset(out_dir + "/test.lnds", test);
    } else {
        std::cerr << "generate-data: unknown dataset '" << dataset << "'\n";
        return 1;
    }
    std::cout << "wrote " << out_dir << "/train.lnds and " << out_dir << "/test.lnds\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Label-noise-robust training toolkit"};
    app.require_subcommand(1);

    // generate-data
    auto* gen = app.add_subcommand("generate-data", "Generate a synthetic dataset");
    std::string gen_dataset = "synth-digits", gen_out = ".";
    std::uint64_t gen_seed = 1;
    std::size_t gen_train = 4000, gen_test = 1000, gen_c0 = 623, gen_c1 = 624;
    double gen_test_fraction = 0.2;
    bool gen_idx = false;
    gen->add_option("--dataset", gen_dataset, "synth-digits|synth-bdd")->required();
    gen->add_option("--out-dir", gen_out, "output directory")->required();
    gen->add_option("--seed", gen_seed, "generator seed")->required();
    gen->add_option("--train-count", gen_train, "training samples (synth-digits)");
    gen->add_option("--test-count", gen_test, "test samples (synth-digits)");
    gen->add_option("--bdd-class0", gen_c0, "healthy samples (synth-bdd)");
    gen->add_option("--bdd-class1", gen_c1, "faulty samples (synth-bdd)");
    gen->add_option("--test-fraction", gen_test_fraction, "test split fraction (synth-bdd)");
    gen->add_flag("--emit-idx", gen_idx, "also write IDX image/label files (synth-digits)");

    // inject-noise
    auto* inject = app.add_subcommand("inject-noise", "Flip labels in a dataset container");
    std::string inj_in, inj_out, inj_record;
    double inj_ratio = 0.0;
    std::uint64_t inj_seed = 1;
    inject->add_option("--in", inj_in, "input dataset container")->required();
    inject->add_option("--out", inj_out, "output dataset container")->required();
    inject->add_option("--noise-ratio", inj_ratio, "fraction of labels to flip")->required();
    inject->add_option("--seed", inj_seed, "RNG seed")->required();
    inject->add_option("--record-out", inj_record, "noise record JSON output path");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one configuration");
    CommonTrainOptions train_opt;
    add_train_options(train_cmd, train_opt, /*required=*/true);

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "Run a strategy/noise grid");
    CommonTrainOptions suite_opt;
    std::string suite_strategies, suite_ratios, suite_assumed, suite_summary, suite_metrics_dir;
    add_train_options(suite_cmd, suite_opt, /*required=*/false);
    suite_cmd->add_option("--strategies", suite_strategies, "comma-separated strategy list")
        ->required();
    suite_cmd->add_option("--noise-ratios", suite_ratios, "comma-separated noise ratios")
        ->required();
    suite_cmd->add_option("--assumed-levels", suite_assumed,
                          "comma-separated assumed levels (default: the --assumed-noise value)");
    suite_cmd->add_option("--summary-out", suite_summary, "summary CSV path")->required();
    suite_cmd->add_option("--metrics-dir", suite_metrics_dir,
                          "directory for per-cell metrics JSONL files");

    // od-trace
    auto* trace_cmd = app.add_subcommand(
        "od-trace", "Train an OD strategy and dump per-epoch whisker records");
    CommonTrainOptions trace_opt;
    std::string trace_out;
    add_train_options(trace_cmd, trace_opt, /*required=*/true);
    trace_cmd->add_option("--out", trace_out, "OD trace JSONL output path")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize metrics files");
    std::vector<std::string> report_inputs;
    std::string report_summary, report_series;
    report_cmd->add_option("metrics", report_inputs, "metrics JSONL files")->required();
    report_cmd->add_option("--summary-out", report_summary, "summary CSV path")->required();
    report_cmd->add_option("--series-out", report_series, "per-epoch series CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate_data(gen_dataset, gen_out, gen_seed, gen_train, gen_test, gen_c0,
                                     gen_c1, gen_test_fraction, gen_idx);
        }
        if (inject->parsed()) {
            ln::LabeledDataset ds = ln::load_dataset(inj_in);
            ln::SeededRng rng = ln::SeededRng(inj_seed).substream("noise");
            ln::NoiseRecord record = ln::inject_symmetric_noise(ds, inj_ratio, rng);
            ln::save_dataset(inj_out, ds);
            if (!inj_record.empty()) {
                ln::ordered_json j;
                j["noise_ratio"] = record.noise_ratio;
                j["seed"] = inj_seed;
                j["flipped"] = record.flipped;
                std::ofstream os(inj_record, std::ios::binary);
                os << j.dump() << "\n";
            }
            std::cout << "flipped " << record.flipped.size() << " of " << ds.size()
                      << " labels\n";
            return 0;
        }
        if (train_cmd->parsed()) {
            ln::ExperimentConfig cfg = finalize(train_opt);
            std::unique_ptr<ln::JsonlOdTrace> trace;
            if (!cfg.od_trace_out.empty())
                trace = std::make_unique<ln::JsonlOdTrace>(cfg.od_trace_out);
            const auto runs = ln::train(cfg, trace.get());
            if (!cfg.metrics_out.empty()) ln::write_metrics(cfg.metrics_out, cfg, runs);
            std::vector<double> finals;
            for (const auto& r : runs) finals.push_back(r.final_test_accuracy);
            std::printf("%s noise=%.2f assumed=%s: test acc %.4f +/- %.4f (%zu repeats)\n",
                        ln::strategy_name(cfg.strategy), cfg.noise_ratio, cfg.assumption.name(),
                        ln::mean(finals), ln::stddev_population(finals), finals.size());
            return 0;
        }
        if (suite_cmd->parsed()) {
            ln::ExperimentConfig base = finalize(suite_opt);
            std::vector<ln::Strategy> strategies;
            {
                std::stringstream ss(suite_strategies);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty()) strategies.push_back(ln::strategy_from_name(tok));
            }
            std::vector<ln::NoiseAssumption> assumptions;
            if (suite_assumed.empty()) {
                assumptions.push_back(base.assumption);
            } else {
                std::stringstream ss(suite_assumed);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty()) assumptions.push_back(ln::NoiseAssumption::from_name(tok));
            }
            auto grid = ln::make_grid(base, strategies, parse_double_list(suite_ratios),
                                      assumptions);
            for (auto& cfg : grid) {
                if (!suite_metrics_dir.empty()) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "/%s_n%03d_%s.jsonl",
                                  ln::strategy_name(cfg.strategy),
                                  static_cast<int>(cfg.noise_ratio * 100 + 0.5),
                                  cfg.assumption.name());
                    cfg.metrics_out = suite_metrics_dir + buf;
                } else {
                    cfg.metrics_out.clear();
                }
            }
            ln::SuiteResult result = ln::run_suite(grid);
            ln::write_summary_csv(suite_summary, result.summary());
            for (const auto& cell : result.cells) {
                if (cell.failed)
                    std::fprintf(stderr, "cell %s noise=%.2f failed: %s\n",
                                 ln::strategy_name(cell.config.strategy),
                                 cell.config.noise_ratio, cell.error.c_str());
                else
                    std::printf("%s noise=%.2f assumed=%s: %.4f +/- %.4f\n",
                                cell.summary.strategy.c_str(), cell.summary.noise_ratio,
                                cell.summary.assumed.c_str(), cell.summary.mean_acc,
                                cell.summary.std_acc);
            }
            return 0;
        }
        if (trace_cmd->parsed()) {
            ln::ExperimentConfig cfg = finalize(trace_opt);
            if (!ln::strategy_uses_od(cfg.strategy))
                throw std::invalid_argument("od-trace needs an outlier-detection strategy");
            ln::JsonlOdTrace trace(trace_out);
            const auto runs = ln::train(cfg, &trace);
            if (!cfg.metrics_out.empty()) ln::write_metrics(cfg.metrics_out, cfg, runs);
            std::cout << "wrote " << trace_out << "\n";
            return 0;
        }
        if (report_cmd->parsed()) {
            ln::report(report_inputs, report_summary, report_series);
            std::cout << "wrote " << report_summary << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
