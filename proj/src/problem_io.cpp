#include "nsmorse/problem_io.hpp"

#include <fstream>

#include "nsmorse/errors.hpp"

namespace nsmorse {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
    throw Error(ErrorKind::Validation, "problem-schema", msg);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) schema_error(where + ": expected a number");
    return v.get<double>();
}

CoefficientField field_from_json(const json& v, int n, const std::string& where) {
    if (v.is_array() || v.is_number()) return CoefficientField::constant(matrix_from_json(v, n, n, where));
    if (!v.is_object()) schema_error(where + ": expected a matrix or a coefficient object");
    const std::string kind = v.value("kind", std::string("constant"));
    if (kind == "constant") {
        if (!v.contains("value")) schema_error(where + ": constant field needs 'value'");
        return CoefficientField::constant(matrix_from_json(v.at("value"), n, n, where + ".value"));
    }
    if (kind == "polynomial") {
        if (!v.contains("coefficients") || !v.at("coefficients").is_array() || v.at("coefficients").empty())
            schema_error(where + ": polynomial field needs a non-empty 'coefficients' array");
        std::vector<RMatrix> cs;
        const auto& arr = v.at("coefficients");
        for (std::size_t k = 0; k < arr.size(); ++k)
            cs.push_back(matrix_from_json(arr[k], n, n, where + ".coefficients[" + std::to_string(k) + "]"));
        return CoefficientField::polynomial(std::move(cs));
    }
    if (kind == "grid") {
        if (!v.contains("nodes") || !v.contains("values") || !v.at("nodes").is_array() || !v.at("values").is_array())
            schema_error(where + ": grid field needs 'nodes' and 'values' arrays");
        std::vector<double> nodes;
        for (const auto& x : v.at("nodes")) nodes.push_back(number(x, where + ".nodes"));
        std::vector<RMatrix> values;
        const auto& arr = v.at("values");
        for (std::size_t k = 0; k < arr.size(); ++k)
            values.push_back(matrix_from_json(arr[k], n, n, where + ".values[" + std::to_string(k) + "]"));
        return CoefficientField::grid(std::move(nodes), std::move(values));
    }
    schema_error(where + ": unknown coefficient kind '" + kind + "'");
}

json field_to_json(const CoefficientField& f) {
    json out;
    switch (f.kind()) {
    case CoefficientKind::Constant:
        out["kind"] = "constant";
        out["value"] = matrix_to_json(f.values().front());
        break;
    case CoefficientKind::Polynomial:
        out["kind"] = "polynomial";
        out["coefficients"] = json::array();
        for (const auto& c : f.values()) out["coefficients"].push_back(matrix_to_json(c));
        break;
    case CoefficientKind::Grid:
        out["kind"] = "grid";
        out["nodes"] = f.nodes();
        out["values"] = json::array();
        for (const auto& c : f.values()) out["values"].push_back(matrix_to_json(c));
        break;
    }
    return out;
}

}  // namespace

RMatrix matrix_from_json(const json& v, int rows, int cols, const std::string& where) {
    RMatrix m(rows, cols);
    if (v.is_number()) {
        if (rows != 1 || cols != 1) schema_error(where + ": scalar given for a matrix");
        m(0, 0) = v.get<double>();
        return m;
    }
    if (!v.is_array()) schema_error(where + ": expected an array");
    const auto rows_sz = static_cast<std::size_t>(rows);
    const auto cols_sz = static_cast<std::size_t>(cols);
    if (!v.empty() && v.front().is_array()) {
        if (v.size() != rows_sz) schema_error(where + ": expected " + std::to_string(rows) + " rows");
        for (std::size_t i = 0; i < rows_sz; ++i) {
            if (!v[i].is_array() || v[i].size() != cols_sz)
                schema_error(where + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
            for (std::size_t j = 0; j < cols_sz; ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(v[i][j], where);
        }
        return m;
    }
    if (v.size() != rows_sz * cols_sz)
        schema_error(where + ": expected " + std::to_string(rows * cols) + " entries in row-major order");
    for (std::size_t k = 0; k < v.size(); ++k)
        m(static_cast<Eigen::Index>(k / cols_sz), static_cast<Eigen::Index>(k % cols_sz)) = number(v[k], where);
    return m;
}

json matrix_to_json(const RMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(row);
    }
    return out;
}

ProblemSpec problem_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("problem document must be an object");
    if (!doc.contains("schema_version")) schema_error("missing 'schema_version'");
    if (doc.at("schema_version") != kProblemSchemaVersion)
        schema_error("unsupported schema_version " + doc.at("schema_version").dump());

    ProblemSpec spec;
    spec.name = doc.value("name", std::string());
    if (!doc.contains("n") || !doc.at("n").is_number_integer()) schema_error("'n' must be an integer");
    spec.n = doc.at("n").get<int>();
    if (spec.n < 1) schema_error("'n' must be at least 1");
    if (!doc.contains("length")) schema_error("missing 'length'");
    spec.length = number(doc.at("length"), "length");
    const int n = spec.n;

    if (!doc.contains("coefficients") || !doc.at("coefficients").is_object()) schema_error("missing 'coefficients'");
    const auto& co = doc.at("coefficients");
    if (!co.contains("P")) schema_error("coefficients: missing 'P'");
    spec.P = field_from_json(co.at("P"), n, "coefficients.P");
    spec.Q = co.contains("Q") ? field_from_json(co.at("Q"), n, "coefficients.Q") : CoefficientField::zero(n);
    spec.S = co.contains("S") ? field_from_json(co.at("S"), n, "coefficients.S") : CoefficientField::zero(n);
    spec.C0 = co.contains("C0") ? field_from_json(co.at("C0"), n, "coefficients.C0") : CoefficientField::zero(n);

    if (doc.contains("path")) {
        const auto& p = doc.at("path");
        if (!p.is_object()) schema_error("'path' must be an object");
        if (p.contains("shift")) spec.path.shift = number(p.at("shift"), "path.shift");
        if (p.contains("offset")) spec.path.offset = number(p.at("offset"), "path.offset");
        if (p.contains("scale")) spec.path.scale = number(p.at("scale"), "path.scale");
        if (p.contains("direction")) spec.path.direction = field_from_json(p.at("direction"), n, "path.direction");
    }

    if (!doc.contains("boundary")) schema_error("missing 'boundary'");
    const auto& b = doc.at("boundary");
    if (b.is_string() || (b.is_object() && b.contains("preset"))) {
        const std::string name = b.is_string() ? b.get<std::string>() : b.at("preset").get<std::string>();
        const auto preset = parse_preset(name);
        if (!preset || *preset == BoundaryPreset::Custom) {
            if (!(b.is_object() && b.contains("R0") && b.contains("R1")))
                schema_error("boundary: unknown preset '" + name + "'");
        } else {
            spec.boundary = BoundaryCondition::make(*preset, n);
        }
    }
    if (b.is_object() && b.contains("R0") && b.contains("R1") && spec.boundary.R0.size() == 0) {
        spec.boundary = BoundaryCondition::custom(matrix_from_json(b.at("R0"), 2 * n, 2 * n, "boundary.R0"),
                                                  matrix_from_json(b.at("R1"), 2 * n, 2 * n, "boundary.R1"));
    }
    if (spec.boundary.R0.size() == 0) schema_error("boundary: give a preset or both R0 and R1");

    if (doc.contains("rectangle")) {
        const auto& r = doc.at("rectangle");
        Rectangle rect;
        rect.t_min = number(r.at("t_min"), "rectangle.t_min");
        rect.t_max = number(r.at("t_max"), "rectangle.t_max");
        rect.s_min = number(r.at("s_min"), "rectangle.s_min");
        rect.s_max = number(r.at("s_max"), "rectangle.s_max");
        spec.rectangle = rect;
    }
    if (doc.contains("eigenvalue_floor")) spec.eigenvalue_floor = number(doc.at("eigenvalue_floor"), "eigenvalue_floor");
    if (doc.contains("steps_per_unit")) spec.steps_per_unit = number(doc.at("steps_per_unit"), "steps_per_unit");
    if (doc.contains("reaction_diffusion")) {
        const auto& rd = doc.at("reaction_diffusion");
        ReactionDiffusionData data;
        data.d = number(rd.at("d"), "reaction_diffusion.d");
        data.V = matrix_from_json(rd.at("V"), 2, 2, "reaction_diffusion.V");
        data.a = number(rd.at("a"), "reaction_diffusion.a");
        spec.reaction_diffusion = data;
    }
    return spec;
}

json problem_to_json(const ProblemSpec& spec) {
    json doc;
    doc["schema_version"] = kProblemSchemaVersion;
    if (!spec.name.empty()) doc["name"] = spec.name;
    doc["n"] = spec.n;
    doc["length"] = spec.length;
    doc["coefficients"] = {{"P", field_to_json(spec.P)},
                           {"Q", field_to_json(spec.Q)},
                           {"S", field_to_json(spec.S)},
                           {"C0", field_to_json(spec.C0)}};
    json path = {{"shift", spec.path.shift}, {"offset", spec.path.offset}, {"scale", spec.path.scale}};
    if (!spec.path.direction.values().empty()) path["direction"] = field_to_json(spec.path.direction);
    doc["path"] = path;
    if (spec.boundary.preset != BoundaryPreset::Custom)
        doc["boundary"] = {{"preset", to_string(spec.boundary.preset)}};
    else
        doc["boundary"] = {{"R0", matrix_to_json(spec.boundary.R0)}, {"R1", matrix_to_json(spec.boundary.R1)}};
    if (spec.rectangle)
        doc["rectangle"] = {{"t_min", spec.rectangle->t_min},
                            {"t_max", spec.rectangle->t_max},
                            {"s_min", spec.rectangle->s_min},
                            {"s_max", spec.rectangle->s_max}};
    if (spec.eigenvalue_floor) doc["eigenvalue_floor"] = *spec.eigenvalue_floor;
    doc["steps_per_unit"] = spec.steps_per_unit;
    if (spec.reaction_diffusion)
        doc["reaction_diffusion"] = {{"d", spec.reaction_diffusion->d},
                                     {"V", matrix_to_json(spec.reaction_diffusion->V)},
                                     {"a", spec.reaction_diffusion->a}};
    return doc;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Validation, "readable-problem-file", "cannot open problem file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        schema_error(path + ": " + e.what());
    }
    try {
        ProblemSpec spec = problem_from_json(doc);
        if (spec.name.empty()) spec.name = path;
        return spec;
    } catch (const json::exception& e) {
        schema_error(path + ": " + e.what());
    }
}

}  // namespace nsmorse
