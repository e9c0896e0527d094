#include "nsmorse/report.hpp"

namespace nsmorse {

using nlohmann::json;

json complex_to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Rectangle& r) {
    return {{"t_min", r.t_min}, {"t_max", r.t_max}, {"s_min", r.s_min}, {"s_max", r.s_max}};
}

json to_json(const ValidationReport& r) {
    return {{"ok", r.ok()},
            {"violations", r.violations},
            {"c_sup", r.c_sup},
            {"p_min_eigenvalue", r.p_min_eigenvalue},
            {"p_positive_definite", r.p_positive_definite}};
}

json to_json(const DegreeResult& r, bool include_trace) {
    json cells = json::array();
    for (const auto& c : r.zero_cells) cells.push_back({{"cell", to_json(c.cell)}, {"degree", c.degree}});
    json out = {{"degree", r.degree},
                {"residual", r.residual},
                {"total_winding", r.trace.total_winding},
                {"samples", r.trace.samples.size()},
                {"min_log_abs", r.trace.min_log_abs},
                {"min_margin", r.trace.min_margin},
                {"zero_cells", cells}};
    if (include_trace) {
        json trace = json::array();
        for (const auto& s : r.trace.samples)
            trace.push_back({s.h, s.v, s.value.log_abs, s.value.arg});
        out["trace"] = trace;
    }
    return out;
}

json to_json(const MorseResult& r) {
    json neg = json::array();
    for (const auto& z : r.negative) neg.push_back(complex_to_json(z));
    return {{"index", r.index},
            {"m", r.m},
            {"min_abs_re", r.min_abs_re},
            {"min_re", r.min_re},
            {"max_abs_im_negative", r.max_abs_im_negative},
            {"negative_eigenvalues", neg}};
}

json to_json(const CrossingLedger& r) {
    json crossings = json::array();
    for (const auto& c : r.crossings)
        crossings.push_back({{"t", c.t},
                             {"eigenvalue", complex_to_json(c.eigenvalue)},
                             {"direction", c.direction},
                             {"multiplicity", c.multiplicity}});
    return {{"crossings", crossings},
            {"net", r.net},
            {"morse_start", r.morse_start},
            {"morse_end", r.morse_end},
            {"det_winding", r.det_winding},
            {"cross_checked", r.cross_checked},
            {"m", r.m},
            {"snapshots", r.snapshots}};
}

json to_json(const SfMorseReport& r) {
    return {{"sf", r.sf},
            {"morse_start", r.morse_start},
            {"morse_end", r.morse_end},
            {"det_winding", r.det_winding},
            {"pass", r.pass}};
}

json to_json(const ConjugatePoint& p) {
    return {{"x", p.x},
            {"bracket", {p.bracket_lo, p.bracket_hi}},
            {"ratio", p.ratio},
            {"multiplicity", p.multiplicity},
            {"local_degree", p.local_degree}};
}

json to_json(const ConjugateReport& r) {
    json points = json::array();
    for (const auto& p : r.points) points.push_back(to_json(p));
    json cells = json::array();
    for (const auto& c : r.zero_cells) cells.push_back({{"cell", to_json(c.cell)}, {"degree", c.degree}});
    int with_multiplicity = 0;
    for (const auto& p : r.points) with_multiplicity += p.multiplicity;
    return {{"conjugate_points", points},
            {"distinct", r.points.size()},
            {"with_multiplicity", with_multiplicity},
            {"zero_cells", cells},
            {"delta", r.delta},
            {"strip_height", r.strip_height},
            {"t", r.t},
            {"total_degree", r.total_degree},
            {"local_sum", r.local_sum}};
}

json to_json(const TuringReport& r) {
    json out = {{"tr_V", r.tr_V},
                {"det_V", r.det_V},
                {"mass", r.mass},
                {"delta1", r.delta1},
                {"trace_negative", r.trace_negative},
                {"det_positive", r.det_positive},
                {"diffusive", r.diffusive},
                {"delta1_positive", r.delta1_positive},
                {"mass_positive", r.mass_positive},
                {"holds", r.holds()}};
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

json to_json(const EigenCountReport& r) {
    json roster = json::array();
    for (const auto& e : r.roster)
        roster.push_back({{"k", e.k}, {"mu", e.mu}, {"lambda", e.lambda}, {"residual", e.residual}});
    return {{"a", r.a}, {"lower", r.lower}, {"upper", r.upper}, {"count", r.count}, {"roster", roster}};
}

json to_json(const ConjugateSets& r) {
    json c3 = json::array();
    for (std::size_t i = 0; i < r.C3.size(); ++i)
        c3.push_back({{"x", r.C3[i]}, {"k1", r.C3_indices[i].first}, {"k2", r.C3_indices[i].second}});
    return {{"C1", r.C1},
            {"C2", r.C2},
            {"C3", c3},
            {"count_with_multiplicity", r.count_with_multiplicity},
            {"count_without_multiplicity", r.count_without_multiplicity}};
}

json to_json(const IdentityReport& r) {
    return {{"c1_minus_c2", r.c1_minus_c2},
            {"negative_count", r.negative_count},
            {"degree", r.degree},
            {"oracle", r.oracle},
            {"oracle_max_abs_im", r.oracle_max_abs_im},
            {"pass", r.pass}};
}

json to_json(const NilpotentReport& r) {
    return {{"oracle_with", r.oracle_with},
            {"oracle_without", r.oracle_without},
            {"degree_with", r.degree_with},
            {"degree_without", r.degree_without},
            {"pass", r.pass}};
}

json to_json(const Error& e) {
    json out = {{"kind", std::string(to_string(e.kind()))},
                {"precondition", e.precondition()},
                {"message", e.what()},
                {"ill_posed", is_ill_posed(e.kind())}};
    if (const auto* bz = dynamic_cast<const BoundaryZero*>(&e)) out["at"] = {bz->h(), bz->v()};
    if (const auto* pb = dynamic_cast<const PropagationBlowup*>(&e)) out["x"] = pb->x();
    return out;
}

json envelope(const std::string& command, json payload) {
    return {{"schema_version", kReportSchemaVersion}, {"command", command}, {"result", std::move(payload)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace nsmorse
