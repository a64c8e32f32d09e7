#include "regime/markov/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace regime::markov {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) { return m.flat(); }

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
    const auto flat = j.get<std::vector<double>>();
    if (flat.size() != rows * cols)
        throw std::runtime_error("model JSON: matrix size mismatch");
    Matrix m(rows, cols);
    m.flat() = flat;
    return m;
}

}  // namespace

std::string to_json(const HsmmModel& model) {
    model.validate();
    json doc;
    doc["format"] = "regime-forecast-model";
    doc["version"] = 1;
    doc["kind"] = to_string(model.kind);
    doc["M"] = model.num_states();
    doc["k"] = model.emission.num_components();
    doc["A"] = matrix_to_json(model.transition);
    doc["pi"] = model.initial;
    doc["weights"] = matrix_to_json(model.emission.weights);
    doc["means"] = matrix_to_json(model.emission.means);
    doc["variances"] = matrix_to_json(model.emission.variances);
    doc["family"] = to_string(model.sojourn.family);
    doc["U_max"] = model.sojourn.u_max;
    json sp;
    sp["p1"] = model.sojourn.p1;
    sp["p2"] = model.sojourn.p2;
    sp["shift"] = model.sojourn.shift;
    doc["sojourn_params"] = sp;
    return doc.dump(2);
}

HsmmModel model_from_json(const std::string& text) {
    json doc = json::parse(text);
    if (doc.value("format", "") != "regime-forecast-model")
        throw std::runtime_error("model JSON: unrecognized document");
    if (doc.value("version", 0) != 1)
        throw std::runtime_error("model JSON: unsupported version");
    HsmmModel model;
    model.kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const std::size_t m = doc.at("M").get<std::size_t>();
    const std::size_t k = doc.at("k").get<std::size_t>();
    model.transition = matrix_from_json(doc.at("A"), m, m);
    model.initial = doc.at("pi").get<std::vector<double>>();
    model.emission.weights = matrix_from_json(doc.at("weights"), m, k);
    model.emission.means = matrix_from_json(doc.at("means"), m, k);
    model.emission.variances = matrix_from_json(doc.at("variances"), m, k);
    model.sojourn.family = sojourn_family_from_string(doc.at("family").get<std::string>());
    model.sojourn.u_max = doc.at("U_max").get<int>();
    const auto& sp = doc.at("sojourn_params");
    model.sojourn.p1 = sp.at("p1").get<std::vector<double>>();
    model.sojourn.p2 = sp.at("p2").get<std::vector<double>>();
    model.sojourn.shift = sp.at("shift").get<std::vector<int>>();
    model.validate();
    return model;
}

void save_model(const HsmmModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(model) << '\n';
}

HsmmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace regime::markov
