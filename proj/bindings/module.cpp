// Python bindings: the regime model, the forecasters and the data plumbing
// with numpy in and out. Heavy lifting stays in the C++ library; this file
// only converts containers.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regime/data/csv.hpp"
#include "regime/data/series.hpp"
#include "regime/data/synth.hpp"
#include "regime/eval/metrics.hpp"
#include "regime/forecast/ar_hmm.hpp"
#include "regime/forecast/arch.hpp"
#include "regime/forecast/features.hpp"
#include "regime/forecast/serialize.hpp"
#include "regime/forecast/train.hpp"
#include "regime/markov/fit.hpp"
#include "regime/markov/inference.hpp"
#include "regime/markov/serialize.hpp"

namespace py = pybind11;
using namespace regime;

namespace {

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
    return {a.data(), a.data() + a.size()};
}

markov::FitConfig fit_config(std::size_t num_states, std::size_t num_components,
                             const std::string& family, int u_max, std::size_t max_iters,
                             double tol, std::uint64_t seed, std::size_t restarts) {
    markov::FitConfig cfg;
    cfg.num_states = num_states;
    cfg.num_components = num_components;
    cfg.family = markov::sojourn_family_from_string(family);
    cfg.u_max = u_max;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.seed = seed;
    cfg.restarts = restarts;
    return cfg;
}

// Bound as the Forecaster class: a checkpoint plus the feature recipe.
struct PyForecaster {
    forecast::Checkpoint ckpt;
};

forecast::FeatureSet features_for(const PyForecaster& f, const data::SeriesBundle& bundle,
                                  const markov::HsmmModel* hmm, bool smoothed) {
    return forecast::make_features(f.ckpt.spec, bundle, hmm, smoothed);
}

const forecast::SampleSet& pick_split(const forecast::FeatureSet& fs, const std::string& split) {
    if (split == "train") return fs.train;
    if (split == "val") return fs.val;
    if (split == "test") return fs.test;
    throw std::invalid_argument("split must be train, val or test");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Regime-switching traffic flow forecasting core";

    // ----------------------------------------------------------- data
    py::class_<data::SeriesBundle>(m, "SeriesBundle")
        .def_property_readonly("timestamps",
                               [](const data::SeriesBundle& b) { return b.timestamps; })
        .def_property_readonly("flow", [](const data::SeriesBundle& b) { return b.flow; })
        .def_property_readonly("delta", [](const data::SeriesBundle& b) { return b.delta; })
        .def_property_readonly("delta_std",
                               [](const data::SeriesBundle& b) { return b.delta_std; })
        .def_readonly("mean", &data::SeriesBundle::mean)
        .def_readonly("stddev", &data::SeriesBundle::stddev)
        .def_readonly("standardized", &data::SeriesBundle::standardized)
        .def_property_readonly("train_end",
                               [](const data::SeriesBundle& b) { return b.splits.train_end; })
        .def_property_readonly("val_end",
                               [](const data::SeriesBundle& b) { return b.splits.val_end; })
        .def("split",
             [](data::SeriesBundle& b, double train_frac, double val_frac) {
                 data::split(b, train_frac, val_frac);
             },
             py::arg("train_frac") = 0.60, py::arg("val_frac") = 0.15)
        .def("standardize", [](data::SeriesBundle& b) { data::standardize(b); })
        .def("destandardize",
             [](const data::SeriesBundle& b, double z) { return data::destandardize(b, z); });

    m.def("make_bundle",
          [](const std::vector<std::int64_t>& ts, const py::array_t<double>& flow) {
              return data::make_bundle(ts, to_vector(flow));
          },
          py::arg("timestamps"), py::arg("flow"));

    m.def("load_flow_csv",
          [](const std::string& path) {
              data::LoadReport report;
              auto bundle = data::load_flow_csv(path, &report);
              py::dict rep;
              rep["rows_read"] = report.rows_read;
              rep["gaps_interpolated"] = report.gaps_interpolated;
              rep["segments_dropped"] = report.segments_dropped;
              rep["rows_dropped"] = report.rows_dropped;
              return py::make_tuple(bundle, rep);
          },
          py::arg("path"));

    m.def("write_flow_csv", &data::write_flow_csv, py::arg("path"), py::arg("bundle"));

    // ----------------------------------------------------- regime model
    py::class_<markov::HsmmModel>(m, "HsmmModel")
        .def_property_readonly("num_states", &markov::HsmmModel::num_states)
        .def_property_readonly("kind",
                               [](const markov::HsmmModel& h) { return to_string(h.kind); })
        .def_property_readonly("transition",
                               [](const markov::HsmmModel& h) { return to_numpy(h.transition); })
        .def_property_readonly("initial",
                               [](const markov::HsmmModel& h) { return h.initial; })
        .def_property_readonly("means",
                               [](const markov::HsmmModel& h) { return to_numpy(h.emission.means); })
        .def_property_readonly(
            "variances",
            [](const markov::HsmmModel& h) { return to_numpy(h.emission.variances); })
        .def_property_readonly(
            "weights", [](const markov::HsmmModel& h) { return to_numpy(h.emission.weights); })
        .def_property_readonly(
            "sojourn_family",
            [](const markov::HsmmModel& h) { return to_string(h.sojourn.family); })
        .def("sojourn_pmf",
             [](const markov::HsmmModel& h, std::size_t state) {
                 return h.sojourn.pmf_table(state);
             },
             py::arg("state"))
        .def("to_json", [](const markov::HsmmModel& h) { return markov::to_json(h); })
        .def_static("from_json", &markov::model_from_json, py::arg("text"))
        .def("save", &markov::save_model, py::arg("path"))
        .def_static("load", &markov::load_model, py::arg("path"));

    m.def("fit_hmm",
          [](const py::array_t<double>& obs, std::size_t num_states, std::size_t num_components,
             const std::string& family, int u_max, std::size_t max_iters, double tol,
             std::uint64_t seed, std::size_t restarts) {
              auto result = markov::baum_welch_fit(
                  to_vector(obs), fit_config(num_states, num_components, family, u_max,
                                             max_iters, tol, seed, restarts));
              return py::make_tuple(result.model, result.log_likelihood_trace);
          },
          py::arg("obs"), py::arg("num_states") = 3, py::arg("num_components") = 1,
          py::arg("family") = "geometric", py::arg("u_max") = 288, py::arg("max_iters") = 200,
          py::arg("tol") = 1e-6, py::arg("seed") = 0, py::arg("restarts") = 3,
          "EM estimation; returns (model, log_likelihood_trace).");

    m.def("log_likelihood",
          [](const markov::HsmmModel& h, const py::array_t<double>& obs) {
              return markov::log_likelihood(h, to_vector(obs));
          },
          py::arg("model"), py::arg("obs"));

    m.def("viterbi",
          [](const markov::HsmmModel& h, const py::array_t<double>& obs) {
              return markov::viterbi_decode(h, to_vector(obs));
          },
          py::arg("model"), py::arg("obs"));

    m.def("state_posteriors",
          [](const markov::HsmmModel& h, const py::array_t<double>& obs, bool smoothed) {
              return to_numpy(markov::state_posteriors(h, to_vector(obs), smoothed));
          },
          py::arg("model"), py::arg("obs"), py::arg("smoothed") = true);

    m.def("information_criteria",
          [](const markov::HsmmModel& h, double log_likelihood, std::size_t n) {
              auto ic = markov::information_criteria(h, log_likelihood, n);
              return py::make_tuple(ic.aic, ic.bic);
          },
          py::arg("model"), py::arg("log_likelihood"), py::arg("num_observations"),
          "Returns (aic, bic).");

    m.def("synthesize",
          [](const markov::HsmmModel& model, std::size_t length, std::uint64_t seed,
             const std::vector<double>& ar1) {
              data::SynthSpec spec;
              spec.model = model;
              spec.length = length;
              spec.seed = seed;
              spec.ar1 = ar1;
              auto r = data::synthesize(spec);
              return py::make_tuple(r.bundle, r.labels);
          },
          py::arg("model"), py::arg("length"), py::arg("seed") = 0,
          py::arg("ar1") = std::vector<double>{},
          "Ground-truth generator; returns (bundle, labels).");

    // ------------------------------------------------------ forecasters
    py::class_<PyForecaster>(m, "Forecaster")
        .def_property_readonly("arch",
                               [](const PyForecaster& f) { return to_string(f.ckpt.spec.kind); })
        .def_property_readonly("window",
                               [](const PyForecaster& f) { return f.ckpt.spec.window; })
        .def_property_readonly("num_states",
                               [](const PyForecaster& f) { return f.ckpt.spec.num_states; })
        .def_property_readonly("best_epoch",
                               [](const PyForecaster& f) { return f.ckpt.run.best_epoch; })
        .def_property_readonly("history",
                               [](const PyForecaster& f) {
                                   py::list out;
                                   for (const auto& e : f.ckpt.run.history)
                                       out.append(py::make_tuple(e.epoch, e.train_mse, e.val_mse));
                                   return out;
                               })
        .def("predict",
             [](const PyForecaster& f, const data::SeriesBundle& bundle,
                const markov::HsmmModel* hmm, const std::string& split, bool smoothed) {
                 auto fs = features_for(f, bundle, hmm, smoothed);
                 const auto& set = pick_split(fs, split);
                 auto preds = forecast::predict(f.ckpt.net, set);
                 return py::make_tuple(set.targets, preds, set.target_index);
             },
             py::arg("bundle"), py::arg("hmm") = nullptr, py::arg("split") = "test",
             py::arg("smoothed") = true,
             "Returns (targets, predictions, target_index) on the chosen split.")
        .def("to_json", [](const PyForecaster& f) { return forecast::to_json(f.ckpt); })
        .def_static("from_json",
                    [](const std::string& text) {
                        return PyForecaster{forecast::checkpoint_from_json(text)};
                    },
                    py::arg("text"))
        .def("save",
             [](const PyForecaster& f, const std::string& path) {
                 forecast::save_checkpoint(f.ckpt, path);
             },
             py::arg("path"))
        .def_static("load",
                    [](const std::string& path) {
                        return PyForecaster{forecast::load_checkpoint(path)};
                    },
                    py::arg("path"));

    m.def("train_forecaster",
          [](const data::SeriesBundle& bundle, const std::string& arch,
             const markov::HsmmModel* hmm, std::size_t window, std::uint64_t seed,
             std::size_t max_epochs, std::size_t patience, std::size_t batch_size,
             bool smoothed, bool reduced) {
              forecast::ArchitectureSpec spec;
              spec.kind = forecast::arch_from_string(arch);
              spec.num_states = hmm ? hmm->num_states() : 0;
              spec.window = window;
              auto features = forecast::make_features(spec, bundle, hmm, smoothed);
              auto net = reduced ? forecast::build_reduced(spec, seed)
                                 : forecast::build(spec, seed);
              forecast::TrainRun run;
              run.seed = seed;
              run.max_epochs = max_epochs;
              run.patience = patience;
              run.batch_size = batch_size;
              forecast::train(net, features.train, features.val, run);
              return PyForecaster{{spec, std::move(net), std::move(run)}};
          },
          py::arg("bundle"), py::arg("arch") = "baseline", py::arg("hmm") = nullptr,
          py::arg("window") = 12, py::arg("seed") = 0, py::arg("max_epochs") = 500,
          py::arg("patience") = 10, py::arg("batch_size") = 64, py::arg("smoothed") = true,
          py::arg("reduced") = false,
          "Builds the requested architecture and trains it with early stopping.");

    // ----------------------------------------------------------- AR-HMM
    py::class_<forecast::ArHmmModel>(m, "ArHmmModel")
        .def_property_readonly("num_states", &forecast::ArHmmModel::num_states)
        .def_readonly("lag", &forecast::ArHmmModel::lag)
        .def_property_readonly("transition",
                               [](const forecast::ArHmmModel& a) { return to_numpy(a.transition); })
        .def_property_readonly("coef",
                               [](const forecast::ArHmmModel& a) { return to_numpy(a.coef); })
        .def_readonly("intercept", &forecast::ArHmmModel::intercept)
        .def_readonly("noise_var", &forecast::ArHmmModel::noise_var)
        .def("predict_range",
             [](const forecast::ArHmmModel& a, const py::array_t<double>& series,
                std::size_t begin, std::size_t end) {
                 return forecast::ar_hmm_predict_range(a, to_vector(series), begin, end);
             },
             py::arg("series"), py::arg("begin"), py::arg("end"))
        .def("to_json",
             [](const forecast::ArHmmModel& a) { return forecast::to_json(a); })
        .def_static("from_json", &forecast::ar_hmm_from_json, py::arg("text"))
        .def("save", &forecast::save_ar_hmm, py::arg("path"))
        .def_static("load", &forecast::load_ar_hmm, py::arg("path"));

    m.def("fit_ar_hmm",
          [](const py::array_t<double>& series, std::size_t num_states, std::size_t lag,
             std::size_t max_iters, double tol, std::uint64_t seed, std::size_t restarts) {
              forecast::ArHmmFitConfig cfg;
              cfg.num_states = num_states;
              cfg.lag = lag;
              cfg.max_iters = max_iters;
              cfg.tol = tol;
              cfg.seed = seed;
              cfg.restarts = restarts;
              auto r = forecast::fit_ar_hmm(to_vector(series), cfg);
              return py::make_tuple(r.model, r.log_likelihood_trace);
          },
          py::arg("series"), py::arg("num_states") = 5, py::arg("lag") = 1,
          py::arg("max_iters") = 100, py::arg("tol") = 1e-6, py::arg("seed") = 0,
          py::arg("restarts") = 3, "Returns (model, log_likelihood_trace).");

    // ----------------------------------------------------------- metrics
    m.def("metrics",
          [](const py::array_t<double>& y_true, const py::array_t<double>& y_pred) {
              auto ms = eval::metrics(to_vector(y_true), to_vector(y_pred));
              py::dict out;
              out["rmse"] = ms.rmse;
              out["mape"] = ms.mape;
              out["r2"] = ms.r2;
              out["n"] = ms.n;
              out["mape_skipped"] = ms.mape_skipped;
              return out;
          },
          py::arg("y_true"), py::arg("y_pred"));
}
