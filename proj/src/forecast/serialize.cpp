#include "regime/forecast/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace regime::forecast {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) { return m.flat(); }

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
    const auto flat = j.get<std::vector<double>>();
    if (flat.size() != rows * cols)
        throw std::runtime_error("checkpoint JSON: matrix size mismatch");
    Matrix m(rows, cols);
    m.flat() = flat;
    return m;
}

json lstm_to_json(const neural::LstmLayerParams& l) {
    json j;
    j["units"] = l.units;
    j["input_dim"] = l.input_dim;
    j["w_f"] = matrix_to_json(l.w_f);
    j["w_i"] = matrix_to_json(l.w_i);
    j["w_o"] = matrix_to_json(l.w_o);
    j["w_c"] = matrix_to_json(l.w_c);
    j["b_f"] = l.b_f;
    j["b_i"] = l.b_i;
    j["b_o"] = l.b_o;
    j["b_c"] = l.b_c;
    return j;
}

neural::LstmLayerParams lstm_from_json(const json& j) {
    auto l = neural::make_lstm_layer(j.at("units").get<std::size_t>(),
                                     j.at("input_dim").get<std::size_t>());
    const std::size_t cols = l.units + l.input_dim;
    l.w_f = matrix_from_json(j.at("w_f"), l.units, cols);
    l.w_i = matrix_from_json(j.at("w_i"), l.units, cols);
    l.w_o = matrix_from_json(j.at("w_o"), l.units, cols);
    l.w_c = matrix_from_json(j.at("w_c"), l.units, cols);
    l.b_f = j.at("b_f").get<std::vector<double>>();
    l.b_i = j.at("b_i").get<std::vector<double>>();
    l.b_o = j.at("b_o").get<std::vector<double>>();
    l.b_c = j.at("b_c").get<std::vector<double>>();
    l.validate();
    return l;
}

json dense_to_json(const neural::DenseLayerParams& l) {
    json j;
    j["out"] = l.out_dim();
    j["in"] = l.in_dim();
    j["activation"] = l.activation == neural::Activation::LeakyRelu ? "leaky_relu" : "linear";
    j["w"] = matrix_to_json(l.w);
    j["b"] = l.b;
    return j;
}

neural::DenseLayerParams dense_from_json(const json& j) {
    const auto act_name = j.at("activation").get<std::string>();
    neural::Activation act;
    if (act_name == "leaky_relu") {
        act = neural::Activation::LeakyRelu;
    } else if (act_name == "linear") {
        act = neural::Activation::Linear;
    } else {
        throw std::runtime_error("checkpoint JSON: unknown activation " + act_name);
    }
    auto l = neural::make_dense_layer(j.at("out").get<std::size_t>(),
                                      j.at("in").get<std::size_t>(), act);
    l.w = matrix_from_json(j.at("w"), l.out_dim(), l.in_dim());
    l.b = j.at("b").get<std::vector<double>>();
    l.validate();
    return l;
}

}  // namespace

std::string to_json(const Checkpoint& ckpt) {
    ckpt.net.validate();
    json doc;
    doc["format"] = "regime-forecast-checkpoint";
    doc["version"] = 1;
    doc["arch"] = to_string(ckpt.spec.kind);
    doc["num_states"] = ckpt.spec.num_states;
    doc["window"] = ckpt.spec.window;
    doc["reduce_mean_output"] = ckpt.net.reduce_mean_output;
    doc["branches"] = json::array();
    for (const auto& branch : ckpt.net.branches) {
        json b = json::array();
        for (const auto& l : branch) b.push_back(lstm_to_json(l));
        doc["branches"].push_back(b);
    }
    doc["head"] = json::array();
    for (const auto& l : ckpt.net.head) doc["head"].push_back(dense_to_json(l));
    json run;
    run["seed"] = ckpt.run.seed;
    run["max_epochs"] = ckpt.run.max_epochs;
    run["patience"] = ckpt.run.patience;
    run["batch_size"] = ckpt.run.batch_size;
    run["best_epoch"] = ckpt.run.best_epoch;
    json hist = json::array();
    for (const auto& h : ckpt.run.history)
        hist.push_back({{"epoch", h.epoch}, {"train_mse", h.train_mse}, {"val_mse", h.val_mse}});
    run["history"] = hist;
    doc["train_run"] = run;
    return doc.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("format", "") != "regime-forecast-checkpoint")
        throw std::runtime_error("checkpoint JSON: unrecognized document");
    if (doc.value("version", 0) != 1)
        throw std::runtime_error("checkpoint JSON: unsupported version");
    Checkpoint ckpt;
    ckpt.spec.kind = arch_from_string(doc.at("arch").get<std::string>());
    ckpt.spec.num_states = doc.at("num_states").get<std::size_t>();
    ckpt.spec.window = doc.at("window").get<std::size_t>();
    ckpt.net.window = ckpt.spec.window;
    ckpt.net.reduce_mean_output = doc.at("reduce_mean_output").get<bool>();
    for (const auto& b : doc.at("branches")) {
        std::vector<neural::LstmLayerParams> branch;
        for (const auto& l : b) branch.push_back(lstm_from_json(l));
        ckpt.net.branches.push_back(std::move(branch));
    }
    for (const auto& l : doc.at("head")) ckpt.net.head.push_back(dense_from_json(l));
    ckpt.net.validate();
    const auto& run = doc.at("train_run");
    ckpt.run.seed = run.at("seed").get<std::uint64_t>();
    ckpt.run.max_epochs = run.at("max_epochs").get<std::size_t>();
    ckpt.run.patience = run.at("patience").get<std::size_t>();
    ckpt.run.batch_size = run.at("batch_size").get<std::size_t>();
    ckpt.run.best_epoch = run.at("best_epoch").get<std::size_t>();
    for (const auto& h : run.at("history"))
        ckpt.run.history.push_back({h.at("epoch").get<std::size_t>(),
                                    h.at("train_mse").get<double>(),
                                    h.at("val_mse").get<double>()});
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(ckpt) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return checkpoint_from_json(text);
}

std::string to_json(const ArHmmModel& model) {
    model.validate();
    json doc;
    doc["format"] = "regime-forecast-ar-hmm";
    doc["version"] = 1;
    doc["M"] = model.num_states();
    doc["lag"] = model.lag;
    doc["A"] = matrix_to_json(model.transition);
    doc["pi"] = model.initial;
    doc["coef"] = matrix_to_json(model.coef);
    doc["intercept"] = model.intercept;
    doc["noise_var"] = model.noise_var;
    return doc.dump(2);
}

ArHmmModel ar_hmm_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("format", "") != "regime-forecast-ar-hmm")
        throw std::runtime_error("AR-HMM JSON: unrecognized document");
    if (doc.value("version", 0) != 1)
        throw std::runtime_error("AR-HMM JSON: unsupported version");
    ArHmmModel m;
    const std::size_t M = doc.at("M").get<std::size_t>();
    m.lag = doc.at("lag").get<std::size_t>();
    m.transition = matrix_from_json(doc.at("A"), M, M);
    m.initial = doc.at("pi").get<std::vector<double>>();
    m.coef = matrix_from_json(doc.at("coef"), M, m.lag);
    m.intercept = doc.at("intercept").get<std::vector<double>>();
    m.noise_var = doc.at("noise_var").get<std::vector<double>>();
    m.validate();
    return m;
}

void save_ar_hmm(const ArHmmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(model) << '\n';
}

ArHmmModel load_ar_hmm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open AR-HMM file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return ar_hmm_from_json(text);
}

}  // namespace regime::forecast
