// regime-forecast: fit regime models on 5-minute loop-detector flow,
// train the forecasters, and evaluate them from one reproducible config.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regime/data/csv.hpp"
#include "regime/data/series.hpp"
#include "regime/data/synth.hpp"
#include "regime/eval/metrics.hpp"
#include "regime/eval/report.hpp"
#include "regime/forecast/ar_hmm.hpp"
#include "regime/forecast/arch.hpp"
#include "regime/forecast/features.hpp"
#include "regime/forecast/serialize.hpp"
#include "regime/forecast/train.hpp"
#include "regime/markov/fit.hpp"
#include "regime/markov/inference.hpp"
#include "regime/markov/serialize.hpp"

namespace fs = std::filesystem;
using namespace regime;

namespace {

// ---------------------------------------------------------------- logging

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

LogLevel g_log_level = LogLevel::Info;

void init_log_level() {
    const char* env = std::getenv("REGIME_FORECAST_LOG");
    if (!env) return;
    const std::string v(env);
    if (v == "debug") g_log_level = LogLevel::Debug;
    else if (v == "info") g_log_level = LogLevel::Info;
    else if (v == "warn") g_log_level = LogLevel::Warn;
    else if (v == "error") g_log_level = LogLevel::Error;
}

void log_line(LogLevel level, const std::string& msg) {
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (level >= g_log_level)
        std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

// ----------------------------------------------------------------- config

struct RunConfig {
    std::string data;
    std::string out = "out";
    std::uint64_t seed = 0;

    std::vector<std::size_t> states = {3, 5};
    std::vector<std::size_t> components = {1, 2};
    std::vector<std::string> families = {"geometric", "logarithmic", "gamma", "weibull"};
    int u_max = 288;
    std::size_t hmm_max_iters = 200;
    double hmm_tol = 1e-6;
    std::size_t hmm_restarts = 3;

    std::size_t window = 12;
    std::size_t max_epochs = 500;
    std::size_t patience = 10;
    std::size_t batch_size = 64;
    double learning_rate = 0.20;
    double rho = 0.95;
    double epsilon = 1e-7;
    bool smoothed = true;

    std::size_t ar_states = 5;
    std::size_t ar_lags = 1;

    std::size_t synth_length = 30000;
    std::size_t synth_states = 5;
    std::string synth_family = "logarithmic";
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

std::vector<std::size_t> split_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(text)) out.push_back(std::stoul(s));
    return out;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data::CsvError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "data") cfg.data = val;
        else if (key == "out") cfg.out = val;
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "states") cfg.states = split_sizes(val);
        else if (key == "components") cfg.components = split_sizes(val);
        else if (key == "families") cfg.families = split_list(val);
        else if (key == "u_max") cfg.u_max = std::stoi(val);
        else if (key == "hmm_max_iters") cfg.hmm_max_iters = std::stoul(val);
        else if (key == "hmm_tol") cfg.hmm_tol = std::stod(val);
        else if (key == "hmm_restarts") cfg.hmm_restarts = std::stoul(val);
        else if (key == "window") cfg.window = std::stoul(val);
        else if (key == "max_epochs") cfg.max_epochs = std::stoul(val);
        else if (key == "patience") cfg.patience = std::stoul(val);
        else if (key == "batch_size") cfg.batch_size = std::stoul(val);
        else if (key == "learning_rate") cfg.learning_rate = std::stod(val);
        else if (key == "rho") cfg.rho = std::stod(val);
        else if (key == "epsilon") cfg.epsilon = std::stod(val);
        else if (key == "smoothed") cfg.smoothed = (val == "true" || val == "1");
        else if (key == "ar_states") cfg.ar_states = std::stoul(val);
        else if (key == "ar_lags") cfg.ar_lags = std::stoul(val);
        else if (key == "synth_length") cfg.synth_length = std::stoul(val);
        else if (key == "synth_states") cfg.synth_states = std::stoul(val);
        else if (key == "synth_family") cfg.synth_family = val;
        else throw std::invalid_argument("config line " + std::to_string(lineno) +
                                         ": unknown key '" + key + "'");
    }
    if (cfg.states.empty() || cfg.components.empty() || cfg.families.empty())
        throw std::invalid_argument("config: empty model grid");
}

template <typename T>
std::string join(const std::vector<T>& items) {
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out << ',';
        out << items[i];
    }
    return out.str();
}

void print_config(const RunConfig& c) {
    std::cout << "data = " << c.data << "\n"
              << "out = " << c.out << "\n"
              << "seed = " << c.seed << "\n"
              << "states = " << join(c.states) << "\n"
              << "components = " << join(c.components) << "\n"
              << "families = " << join(c.families) << "\n"
              << "u_max = " << c.u_max << "\n"
              << "hmm_max_iters = " << c.hmm_max_iters << "\n"
              << "hmm_tol = " << c.hmm_tol << "\n"
              << "hmm_restarts = " << c.hmm_restarts << "\n"
              << "window = " << c.window << "\n"
              << "max_epochs = " << c.max_epochs << "\n"
              << "patience = " << c.patience << "\n"
              << "batch_size = " << c.batch_size << "\n"
              << "learning_rate = " << c.learning_rate << "\n"
              << "rho = " << c.rho << "\n"
              << "epsilon = " << c.epsilon << "\n"
              << "smoothed = " << (c.smoothed ? "true" : "false") << "\n"
              << "ar_states = " << c.ar_states << "\n"
              << "ar_lags = " << c.ar_lags << "\n"
              << "synth_length = " << c.synth_length << "\n"
              << "synth_states = " << c.synth_states << "\n"
              << "synth_family = " << c.synth_family << "\n";
}

// ------------------------------------------------------------------ utils

data::SeriesBundle load_prepared(const RunConfig& cfg) {
    if (cfg.data.empty()) throw std::invalid_argument("no data path given (config key 'data')");
    data::LoadReport report;
    auto bundle = data::load_flow_csv(cfg.data, &report);
    log_line(LogLevel::Info, "loaded " + std::to_string(report.rows_read) + " rows, kept " +
                                 std::to_string(bundle.flow.size()));
    data::split(bundle);
    data::standardize(bundle);
    return bundle;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ------------------------------------------------------------ subcommands

void cmd_fit_hmm(const RunConfig& cfg) {
    auto bundle = load_prepared(cfg);
    const std::vector<double> train(bundle.delta_std.begin(),
                                    bundle.delta_std.begin() + bundle.splits.train_end);
    fs::create_directories(cfg.out);

    std::vector<eval::FitEntry> fits;
    for (std::size_t m : cfg.states)
        for (std::size_t k : cfg.components)
            for (const auto& family : cfg.families) {
                markov::FitConfig fc;
                fc.num_states = m;
                fc.num_components = k;
                fc.family = markov::sojourn_family_from_string(family);
                fc.u_max = cfg.u_max;
                fc.max_iters = cfg.hmm_max_iters;
                fc.tol = cfg.hmm_tol;
                fc.seed = cfg.seed;
                fc.restarts = cfg.hmm_restarts;
                const std::string label =
                    "M=" + std::to_string(m) + " k=" + std::to_string(k) + " " + family;
                try {
                    auto fit = markov::baum_welch_fit(train, fc);
                    const std::string name = "hmm_M" + std::to_string(m) + "_k" +
                                             std::to_string(k) + "_" + family + ".json";
                    markov::save_model(fit.model, (fs::path(cfg.out) / name).string());
                    fits.push_back({label, fit.log_likelihood_trace.back(), fit.model});
                    log_line(LogLevel::Info, "fitted " + label);
                } catch (const std::exception& e) {
                    log_line(LogLevel::Warn, "cell '" + label + "' failed: " + e.what());
                }
            }
    if (fits.empty()) throw std::runtime_error("every grid cell failed");
    auto table = eval::model_selection_table(fits, train.size());
    write_file(fs::path(cfg.out) / "selection.csv", table.to_csv());
    write_file(fs::path(cfg.out) / "selection.txt", table.to_text());
    std::cout << table.to_text();
}

void cmd_decode(const RunConfig& cfg, const std::string& model_path) {
    auto bundle = load_prepared(cfg);
    auto model = markov::load_model(model_path);
    auto path = markov::viterbi_decode(model, bundle.delta_std);
    fs::create_directories(cfg.out);
    std::ostringstream out;
    out << "timestamp,state\n";
    for (std::size_t t = 0; t < path.size(); ++t)
        out << data::format_iso8601(bundle.delta_timestamp(t)) << ',' << path[t] << '\n';
    write_file(fs::path(cfg.out) / "decode.csv", out.str());
}

std::string history_csv(const forecast::TrainRun& run) {
    std::ostringstream out;
    out << "epoch,train_mse,val_mse\n";
    for (const auto& h : run.history)
        out << h.epoch << ',' << csv_num(h.train_mse) << ',' << csv_num(h.val_mse) << '\n';
    return out.str();
}

void cmd_train(const RunConfig& cfg, const std::string& arch_name,
               const std::string& model_path) {
    auto bundle = load_prepared(cfg);
    fs::create_directories(cfg.out);

    if (arch_name == "ar-hmm") {
        forecast::ArHmmFitConfig fc;
        fc.num_states = cfg.ar_states;
        fc.lag = cfg.ar_lags;
        fc.seed = cfg.seed;
        const std::vector<double> train(bundle.delta_std.begin(),
                                        bundle.delta_std.begin() + bundle.splits.train_end);
        auto fit = forecast::fit_ar_hmm(train, fc);
        const std::string name = "ar_hmm_L" + std::to_string(cfg.ar_lags) + ".json";
        forecast::save_ar_hmm(fit.model, (fs::path(cfg.out) / name).string());
        std::ostringstream out;
        out << "iter,log_likelihood\n";
        for (std::size_t i = 0; i < fit.log_likelihood_trace.size(); ++i)
            out << i << ',' << csv_num(fit.log_likelihood_trace[i]) << '\n';
        write_file(fs::path(cfg.out) / "history_ar-hmm.csv", out.str());
        return;
    }

    forecast::ArchitectureSpec spec;
    spec.kind = forecast::arch_from_string(arch_name);
    spec.window = cfg.window;
    markov::HsmmModel hmm;
    const markov::HsmmModel* hmm_ptr = nullptr;
    if (spec.kind != forecast::ArchKind::Baseline) {
        if (model_path.empty())
            throw std::invalid_argument("architecture '" + arch_name +
                                        "' needs a fitted regime model (--model)");
        hmm = markov::load_model(model_path);
        hmm_ptr = &hmm;
        spec.num_states = hmm.num_states();
    }
    auto features = forecast::make_features(spec, bundle, hmm_ptr, cfg.smoothed);
    auto net = forecast::build(spec, cfg.seed);
    forecast::TrainRun run;
    run.seed = cfg.seed;
    run.max_epochs = cfg.max_epochs;
    run.patience = cfg.patience;
    run.batch_size = cfg.batch_size;
    run.optimizer = {cfg.learning_rate, cfg.rho, cfg.epsilon};
    forecast::train(net, features.train, features.val, run);
    log_line(LogLevel::Info, "best epoch " + std::to_string(run.best_epoch) + ", val mse " +
                                 std::to_string(run.history[run.best_epoch].val_mse));

    forecast::Checkpoint ckpt{spec, std::move(net), std::move(run)};
    forecast::save_checkpoint(ckpt, (fs::path(cfg.out) / ("checkpoint_" + arch_name + ".json"))
                                        .string());
    write_file(fs::path(cfg.out) / ("history_" + arch_name + ".csv"), history_csv(ckpt.run));
}

std::string detect_format(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data::CsvError("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find("regime-forecast-checkpoint") != std::string::npos) return "checkpoint";
    if (text.find("regime-forecast-ar-hmm") != std::string::npos) return "ar-hmm";
    if (text.find("regime-forecast-model") != std::string::npos) return "hmm";
    throw std::invalid_argument("unrecognized model document: " + path);
}

struct TestEval {
    std::string name;
    std::vector<double> predictions;        // standardized
    std::vector<std::size_t> target_index;  // into bundle.delta
    Matrix features;                        // empty for AR-HMM
};

void cmd_predict_or_evaluate(const RunConfig& cfg, const std::vector<std::string>& model_paths,
                             const std::string& hmm_path, bool full_report) {
    auto bundle = load_prepared(cfg);
    fs::create_directories(cfg.out);

    markov::HsmmModel hmm;
    bool have_hmm = false;
    if (!hmm_path.empty()) {
        hmm = markov::load_model(hmm_path);
        have_hmm = true;
    }

    std::vector<TestEval> evals;
    for (const auto& path : model_paths) {
        const std::string format = detect_format(path);
        if (format == "ar-hmm") {
            auto model = forecast::load_ar_hmm(path);
            const std::size_t begin = bundle.splits.val_end + cfg.window;
            TestEval e;
            e.name = "ar-hmm-L" + std::to_string(model.lag);
            e.predictions = forecast::ar_hmm_predict_range(model, bundle.delta_std, begin,
                                                           bundle.delta_std.size());
            for (std::size_t t = begin; t < bundle.delta_std.size(); ++t)
                e.target_index.push_back(t);
            evals.push_back(std::move(e));
        } else if (format == "checkpoint") {
            auto ckpt = forecast::load_checkpoint(path);
            if (ckpt.spec.window != cfg.window)
                throw std::invalid_argument("checkpoint window mismatch: " + path);
            const markov::HsmmModel* hmm_ptr = nullptr;
            if (ckpt.spec.kind != forecast::ArchKind::Baseline) {
                if (!have_hmm)
                    throw std::invalid_argument(
                        "hybrid checkpoints need the regime model (--hmm)");
                hmm_ptr = &hmm;
            }
            auto features = forecast::make_features(ckpt.spec, bundle, hmm_ptr, cfg.smoothed);
            TestEval e;
            e.name = to_string(ckpt.spec.kind);
            e.target_index = features.test.target_index;
            e.features = Matrix(features.test.size(), ckpt.net.feature_dim());
            e.predictions.reserve(features.test.size());
            for (std::size_t i = 0; i < features.test.size(); ++i) {
                auto fwd = neural::forward(ckpt.net, features.test.inputs[i]);
                e.predictions.push_back(fwd.prediction);
                for (std::size_t d = 0; d < fwd.features.size(); ++d)
                    e.features(i, d) = fwd.features[d];
            }
            evals.push_back(std::move(e));
        } else {
            throw std::invalid_argument("expected a checkpoint or AR-HMM file: " + path);
        }
    }
    if (evals.empty()) throw std::invalid_argument("no model files given (--model)");

    // Align every model on the intersection of test targets (AR-HMM and the
    // networks start at the same index when lag <= window).
    std::size_t start = 0;
    for (const auto& e : evals) start = std::max(start, e.target_index.front());
    std::vector<std::size_t> targets;
    for (std::size_t t = start; t < bundle.delta_std.size(); ++t) targets.push_back(t);

    std::vector<double> truth;
    for (std::size_t t : targets) truth.push_back(bundle.delta_std[t]);

    std::vector<eval::ModelEval> aligned;
    for (const auto& e : evals) {
        const std::size_t offset = start - e.target_index.front();
        aligned.push_back(
            {e.name, {e.predictions.begin() + offset, e.predictions.end()}});
    }

    if (!full_report) {
        // predictions CSV per model, in both standardized and flow units
        for (const auto& m : aligned) {
            std::ostringstream out;
            out << "timestamp,y_true,y_pred,y_true_flow,y_pred_flow\n";
            for (std::size_t i = 0; i < targets.size(); ++i) {
                const std::size_t t = targets[i];
                out << data::format_iso8601(bundle.delta_timestamp(t)) << ','
                    << csv_num(truth[i]) << ',' << csv_num(m.predictions[i]) << ','
                    << csv_num(bundle.flow[t + 1]) << ','
                    << csv_num(bundle.flow[t] + data::destandardize(bundle, m.predictions[i]))
                    << '\n';
            }
            write_file(fs::path(cfg.out) / ("predictions_" + m.name + ".csv"), out.str());
        }
        return;
    }

    auto report = eval::comparison_report(aligned, truth);
    write_file(fs::path(cfg.out) / "report.json", report.to_json() + "\n");
    std::cout << report.to_json() << "\n";

    std::vector<std::int64_t> stamps;
    for (std::size_t t : targets) stamps.push_back(bundle.delta_timestamp(t));
    write_file(fs::path(cfg.out) / "trace.csv", eval::trace_csv(stamps, truth, aligned));

    for (const auto& e : evals) {
        if (e.features.rows() == 0) continue;
        const std::size_t offset = start - e.target_index.front();
        std::ostringstream out;
        out << "timestamp";
        for (std::size_t d = 0; d < e.features.cols(); ++d) out << ",f" << d;
        out << ",regime\n";
        for (std::size_t i = offset; i < e.features.rows(); ++i) {
            const std::int64_t ts = bundle.delta_timestamp(e.target_index[i]);
            out << data::format_iso8601(ts);
            for (std::size_t d = 0; d < e.features.cols(); ++d)
                out << ',' << csv_num(e.features(i, d));
            out << ',' << eval::to_string(eval::regime_label(ts)) << '\n';
        }
        write_file(fs::path(cfg.out) / ("features_" + e.name + ".csv"), out.str());
    }
}

void cmd_synth(const RunConfig& cfg) {
    const std::size_t m = cfg.synth_states;
    markov::HsmmModel model;
    const auto family = markov::sojourn_family_from_string(cfg.synth_family);
    model.kind = family == markov::SojournFamily::Geometric ? markov::ModelKind::PlainHmm
                                                            : markov::ModelKind::SemiMarkov;
    model.initial.assign(m, 1.0 / static_cast<double>(m));
    model.transition = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) {
            if (model.kind == markov::ModelKind::PlainHmm)
                model.transition(j, k) = (j == k) ? 0.9 : 0.1 / std::max<std::size_t>(1, m - 1);
            else
                model.transition(j, k) = (j == k) ? 0.0 : 1.0 / static_cast<double>(m - 1);
        }
    if (m == 1) model.transition(0, 0) = model.kind == markov::ModelKind::PlainHmm ? 1.0 : 0.0;
    model.emission.weights = Matrix(m, 1);
    model.emission.means = Matrix(m, 1);
    model.emission.variances = Matrix(m, 1);
    for (std::size_t j = 0; j < m; ++j) {
        model.emission.weights(j, 0) = 1.0;
        model.emission.means(j, 0) =
            (static_cast<double>(j) - 0.5 * static_cast<double>(m - 1)) * 2.0;
        model.emission.variances(j, 0) = 0.25;
    }
    model.sojourn.family = family;
    model.sojourn.u_max = cfg.u_max;
    model.sojourn.p1.assign(m, family == markov::SojournFamily::Geometric ? 0.9 : 0.7);
    model.sojourn.p2.assign(m, 2.0);
    model.sojourn.shift.assign(m, 1);
    if (family == markov::SojournFamily::Gamma || family == markov::SojournFamily::Weibull) {
        model.sojourn.p1.assign(m, 2.0);   // shape
        model.sojourn.p2.assign(m, 6.0);   // scale
    }
    model.validate();

    data::SynthSpec spec;
    spec.model = model;
    spec.length = cfg.synth_length;
    spec.seed = cfg.seed;
    auto result = data::synthesize(spec);

    fs::create_directories(cfg.out);
    data::write_flow_csv((fs::path(cfg.out) / "synth.csv").string(), result.bundle);
    std::ostringstream out;
    out << "timestamp,state\n";
    for (std::size_t t = 0; t < result.labels.size(); ++t)
        out << data::format_iso8601(result.bundle.delta_timestamp(t)) << ','
            << result.labels[t] << '\n';
    write_file(fs::path(cfg.out) / "synth_labels.csv", out.str());
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const data::CsvError*>(&e)) return 2;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return 1;
    const std::string msg = e.what();
    if (msg.find("cannot open") != std::string::npos) return 2;
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    init_log_level();
    CLI::App app{"regime-forecast: regime-switching traffic-flow forecasting"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, arch_name = "baseline", hmm_path;
    std::vector<std::string> model_paths;
    std::uint64_t seed = 0;
    bool seed_set = false, out_set = false, show_config = false;
    std::size_t lags = 0;

    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "run seed")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--out", out_dir, "output directory")
        ->each([&](const std::string&) { out_set = true; });
    app.add_flag("--print-config", show_config, "print the effective config and exit");

    auto* fit = app.add_subcommand("fit-hmm", "fit the regime-model grid on the train split");
    auto* decode = app.add_subcommand("decode", "write the Viterbi state path");
    decode->add_option("--model", model_paths, "fitted regime model file")->required();
    auto* train_cmd = app.add_subcommand("train", "train one forecaster");
    train_cmd->add_option("--arch", arch_name, "baseline|s-hybrid|c-hybrid|ar-hmm");
    train_cmd->add_option("--model", model_paths, "regime model for the hybrids");
    train_cmd->add_option("--lags", lags, "AR-HMM lag order");
    auto* predict = app.add_subcommand("predict", "write test-split predictions");
    predict->add_option("--model", model_paths, "checkpoint / AR-HMM file (repeatable)");
    predict->add_option("--hmm", hmm_path, "regime model used by hybrid checkpoints");
    auto* evaluate = app.add_subcommand("evaluate", "metrics report over checkpoints");
    evaluate->add_option("--model", model_paths, "checkpoint / AR-HMM file (repeatable)");
    evaluate->add_option("--hmm", hmm_path, "regime model used by hybrid checkpoints");
    auto* synth = app.add_subcommand("synth", "generate synthetic flow data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out = out_dir;
        if (lags != 0) cfg.ar_lags = lags;

        if (show_config) {
            print_config(cfg);
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 1;
        }
        if (fit->parsed()) cmd_fit_hmm(cfg);
        else if (decode->parsed()) cmd_decode(cfg, model_paths.front());
        else if (train_cmd->parsed())
            cmd_train(cfg, arch_name, model_paths.empty() ? "" : model_paths.front());
        else if (predict->parsed()) cmd_predict_or_evaluate(cfg, model_paths, hmm_path, false);
        else if (evaluate->parsed()) cmd_predict_or_evaluate(cfg, model_paths, hmm_path, true);
        else if (synth->parsed()) cmd_synth(cfg);
        return 0;
    } catch (const std::exception& e) {
        log_line(LogLevel::Error, e.what());
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
}
