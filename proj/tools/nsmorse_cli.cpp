#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nsmorse/boundary.hpp"
#include "nsmorse/constant_analytic.hpp"
#include "nsmorse/degree.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/morse_theorem.hpp"
#include "nsmorse/oracle.hpp"
#include "nsmorse/parallel.hpp"
#include "nsmorse/problem_io.hpp"
#include "nsmorse/reaction_diffusion.hpp"
#include "nsmorse/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nsmorse;

namespace {

struct RunConfig {
    std::string command;
    std::string problem;
    std::string out_dir = ".";
    bool csv = false;
    unsigned threads = 0;
    int steps = 0;

    // rectangle overrides; NaN keeps the problem value
    double t_min = std::nan("");
    double t_max = std::nan("");
    double s_min = std::nan("");
    double s_max = std::nan("");

    WindingOptions winding;
    bool localize = true;
    LocalizeOptions localize_options;

    double t = 0.0;
    double delta = 0.0;
    double strip = 0.0;
    int scan_samples = 4096;
    double root_tol = 1e-7;
    double rank_tol = 1e-7;
    double x_max = 0.0;

    int m = 0;
    int path_steps = 64;
    int max_refine = 16;
    bool richardson = true;
    bool cross_check = true;
};

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Validation, "writable output directory", "cannot write " + path.string());
    out << text;
}

template <class Fn>
void write_csv(const RunConfig& cfg, const std::string& name, Fn&& fn) {
    if (!cfg.csv) return;
    std::ofstream out(fs::path(cfg.out_dir) / name);
    if (!out) throw Error(ErrorKind::Validation, "writable output directory", "cannot write " + name);
    fn(out);
}

Rectangle rectangle_for(const ProblemSpec& spec, const RunConfig& cfg) {
    Rectangle r = spec.rectangle ? *spec.rectangle : default_rectangle(spec);
    if (!std::isnan(cfg.t_min)) r.t_min = cfg.t_min;
    if (!std::isnan(cfg.t_max)) r.t_max = cfg.t_max;
    if (!std::isnan(cfg.s_min)) r.s_min = cfg.s_min;
    if (!std::isnan(cfg.s_max)) r.s_max = cfg.s_max;
    if (!r.valid()) throw Error(ErrorKind::Validation, "t_min < t_max, s_min < s_max", "empty rectangle");
    return r;
}

MorseOptions morse_options(const RunConfig& cfg) {
    MorseOptions o;
    o.t = cfg.t;
    o.delta = cfg.delta;
    o.strip_height = cfg.strip;
    o.scan_samples = cfg.scan_samples;
    o.root_tolerance = cfg.root_tol;
    o.rank_tolerance = cfg.rank_tol;
    o.steps = cfg.steps;
    o.winding = cfg.winding;
    return o;
}

OracleOptions oracle_options(const RunConfig& cfg) {
    OracleOptions o;
    o.m = cfg.m;
    o.path_steps = cfg.path_steps;
    o.max_refine = cfg.max_refine;
    o.richardson = cfg.richardson;
    o.cross_check = cfg.cross_check;
    o.record_trajectories = cfg.csv;
    return o;
}

json run_degree(const ProblemSpec& spec, const RunConfig& cfg) {
    const Rectangle omega = rectangle_for(spec, cfg);
    DegreeOptions o;
    o.winding = cfg.winding;
    o.localize = cfg.localize;
    o.localize_options = cfg.localize_options;
    o.steps = cfg.steps;
    const DegreeResult r = degree_index(spec, omega, o);
    write_csv(cfg, "degree_trace.csv", [&](std::ostream& os) { write_trace_csv(os, r.trace); });
    json out = to_json(r);
    out["rectangle"] = to_json(omega);
    std::cout << "deg(rho, Omega, 0) = " << r.degree << "\n";
    return out;
}

json run_morse(const ProblemSpec& spec, const RunConfig& cfg) {
    const ConjugateReport r = morse_via_degree(spec, morse_options(cfg));
    write_csv(cfg, "det_g.csv", [&](std::ostream& os) {
        DeterminantMap map(frozen_at(spec, cfg.t), cfg.steps);
        write_det_g_csv(os, map, cfg.t, spec.length, cfg.scan_samples);
    });
    std::cout << "Morse index (degree over V) = " << r.total_degree << "\n";
    return to_json(r);
}

json run_sf(const ProblemSpec& spec, const RunConfig& cfg) {
    const Rectangle omega = rectangle_for(spec, cfg);
    const CrossingLedger ledger = spectral_flow(spec, omega, oracle_options(cfg));
    write_csv(cfg, "trajectories.csv", [&](std::ostream& os) { write_trajectory_csv(os, ledger.trajectories); });
    std::cout << "sf = " << ledger.net << " (m-(start) = " << ledger.morse_start << ", m-(end) = " << ledger.morse_end
              << ")\n";
    json out = to_json(ledger);
    out["rectangle"] = to_json(omega);
    return out;
}

json run_conjugates(const ProblemSpec& spec, const RunConfig& cfg) {
    const ProblemSpec frozen = frozen_at(spec, cfg.t);
    require_valid(frozen);
    if (frozen.boundary.preset != BoundaryPreset::Dirichlet)
        throw Error(ErrorKind::Validation, "dirichlet-boundary", "conjugate points require the Dirichlet preset");
    const double x_max = cfg.x_max > 0.0 ? cfg.x_max : spec.length;
    DeterminantMap map(frozen, cfg.steps);
    const auto points = scan_conjugate_points(map, cfg.t, x_max, morse_options(cfg));
    write_csv(cfg, "det_g.csv", [&](std::ostream& os) { write_det_g_csv(os, map, cfg.t, x_max, cfg.scan_samples); });
    json list = json::array();
    int with_multiplicity = 0;
    for (const auto& p : points) {
        list.push_back(to_json(p));
        with_multiplicity += p.multiplicity;
        std::cout << std::setprecision(15) << "x = " << p.x << "  multiplicity " << p.multiplicity << "\n";
    }
    return {{"x_max", x_max},
            {"conjugate_points", list},
            {"distinct", points.size()},
            {"with_multiplicity", with_multiplicity}};
}

json run_rd(const ProblemSpec& spec, const RunConfig& cfg) {
    const PlanarConstantProblem pr = planar_from_spec(spec);
    const TuringReport turing = turing_check(pr);
    json out;
    out["turing"] = to_json(turing);
    const auto [lp, lm] = lambda_pm(pr, 0.0);
    out["lambda_plus"] = complex_to_json(lp);
    out["lambda_minus"] = complex_to_json(lm);
    std::cout << "Turing conditions: " << (turing.holds() ? "hold" : "fail") << "\n";
    if (!turing.note.empty()) std::cout << "note: " << turing.note << "\n";
    const EigenCountReport count = count_negative_eigenvalues(pr);
    const ConjugateSets sets = conjugate_sets(pr);
    const IdentityReport id = degree_equals_negative_count(pr, cfg.m, false);
    out["negative_eigenvalues"] = to_json(count);
    out["conjugate_sets"] = to_json(sets);
    out["identity"] = to_json(id);
    std::cout << "|C1| = " << sets.C1.size() << ", |C2| = " << sets.C2.size() << ", |C3| = " << sets.C3.size()
              << "\n#negative eigenvalues = " << count.count << "\n";
    std::cout << "i_deg = " << id.degree << ", oracle = " << id.oracle << ", " << (id.pass ? "PASS" : "FAIL") << "\n";
    if (!id.pass)
        throw Error(ErrorKind::Mismatch, "index equals negative count", "routes disagree; see rd-analyze.json");
    return out;
}

struct VerifyRow {
    std::string name;
    std::string text;
    bool pass = false;
    json detail;
};

VerifyRow verify_morse(const ProblemSpec& spec, const RunConfig& cfg) {
    VerifyRow row{"morse-index", "", false, json::object()};
    const int degree = morse_via_degree(spec, morse_options(cfg)).total_degree;
    const int oracle = morse_index(spec, cfg.t, oracle_options(cfg)).index;
    row.detail = {{"degree", degree}, {"oracle", oracle}};
    std::ostringstream os;
    bool pass = degree == oracle;
    const bool planar = spec.reaction_diffusion.has_value();
    if (planar) {
        const PlanarConstantProblem pr = planar_from_spec(spec);
        const EigenCountReport count = count_negative_eigenvalues(pr);
        const ConjugateSets sets = conjugate_sets(pr);
        const int difference = static_cast<int>(sets.C1.size()) - static_cast<int>(sets.C2.size());
        row.detail["negative_count"] = count.count;
        row.detail["c1_minus_c2"] = difference;
        pass = pass && count.count == degree && difference == degree;
        os << "ι_deg=" << degree << ", #neg=" << count.count << ", oracle=" << oracle;
    } else if (modal_eligible(frozen_at(spec, cfg.t))) {
        const int analytic = constant_dirichlet_morse_count(spec, cfg.t);
        row.detail["analytic"] = analytic;
        pass = pass && analytic == degree;
        os << "ι_deg=" << degree << ", analytic=" << analytic << ", oracle=" << oracle;
    } else {
        os << "ι_deg=" << degree << ", oracle=" << oracle;
    }
    row.pass = pass;
    row.text = os.str();
    return row;
}

VerifyRow verify_path(const ProblemSpec& spec, const RunConfig& cfg) {
    VerifyRow row{"spectral-flow", "", false, json::object()};
    const Rectangle omega = rectangle_for(spec, cfg);
    DegreeOptions dopts;
    dopts.winding = cfg.winding;
    dopts.localize = false;
    dopts.steps = cfg.steps;
    const int degree = degree_index(spec, omega, dopts).degree;
    const CrossingLedger ledger = spectral_flow(spec, omega, oracle_options(cfg));
    const int change = ledger.morse_start - ledger.morse_end;
    row.detail = {{"degree", degree}, {"sf", ledger.net}, {"morse_change", change}};
    row.pass = degree == ledger.net && ledger.net == change;
    std::ostringstream os;
    os << "ι_deg=" << degree << ", sf=" << ledger.net << ", m⁻ change=" << change;
    row.text = os.str();
    return row;
}

json run_verify(const ProblemSpec& spec, const RunConfig& cfg, bool& all_pass) {
    std::vector<VerifyRow> rows;
    const auto attempt = [&](const std::string& name, auto&& fn) {
        try {
            rows.push_back(fn());
        } catch (const Error& e) {
            rows.push_back({name, std::string(to_string(e.kind())) + ": " + e.what(), false, to_json(e)});
        }
    };
    if (spec.boundary.preset == BoundaryPreset::Dirichlet)
        attempt("morse-index", [&] { return verify_morse(spec, cfg); });
    if (spec.rectangle || spec.path.shift != 0.0 || !spec.path.direction.values().empty())
        attempt("spectral-flow", [&] { return verify_path(spec, cfg); });

    all_pass = !rows.empty();
    json table = json::array();
    for (const auto& r : rows) {
        all_pass = all_pass && r.pass;
        std::cout << std::left << std::setw(15) << r.name << r.text << ", " << (r.pass ? "PASS" : "FAIL") << "\n";
        table.push_back({{"check", r.name}, {"summary", r.text}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (rows.empty()) std::cout << "no applicable checks\n";
    return {{"rows", table}, {"pass", all_pass}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void add_winding_flags(CLI::App* app, RunConfig& cfg) {
    app->add_option("--samples-per-edge", cfg.winding.samples_per_edge, "initial samples per rectangle edge")
        ->check(CLI::Range(4, 1 << 20))
        ->capture_default_str();
    app->add_option("--max-depth", cfg.winding.max_depth, "bisection depth per boundary segment")
        ->check(CLI::Range(1, 60))
        ->capture_default_str();
    app->add_option("--zero-tol", cfg.winding.zero_tolerance, "zero threshold relative to the local median of |f|")
        ->check(CLI::Range(1e-300, 1e-1))
        ->capture_default_str();
}

void add_rectangle_flags(CLI::App* app, RunConfig& cfg) {
    app->add_option("--t-min", cfg.t_min, "rectangle: lower path parameter");
    app->add_option("--t-max", cfg.t_max, "rectangle: upper path parameter");
    app->add_option("--s-min", cfg.s_min, "rectangle: lower imaginary shift");
    app->add_option("--s-max", cfg.s_max, "rectangle: upper imaginary shift");
}

void add_morse_flags(CLI::App* app, RunConfig& cfg) {
    app->add_option("--t", cfg.t, "path parameter of the operator")->capture_default_str();
    app->add_option("--delta", cfg.delta, "lower cut in x; 0 selects it automatically")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--strip", cfg.strip, "strip half-height M; 0 uses 2 max(C_sup, 1)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--scan-samples", cfg.scan_samples, "samples for the conjugate point scan")
        ->check(CLI::Range(16, 1 << 24))
        ->capture_default_str();
    app->add_option("--root-tol", cfg.root_tol, "accept a scanned minimum below this ratio")
        ->check(CLI::Range(1e-300, 1.0))
        ->capture_default_str();
    app->add_option("--rank-tol", cfg.rank_tol, "relative singular value cutoff for multiplicity")
        ->check(CLI::Range(1e-300, 1.0))
        ->capture_default_str();
}

void add_oracle_flags(CLI::App* app, RunConfig& cfg) {
    app->add_option("--m", cfg.m, "interior grid nodes; 0 uses max(8, 400 length)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--path-steps", cfg.path_steps, "initial snapshots along the path")
        ->check(CLI::Range(2, 1 << 20))
        ->capture_default_str();
    app->add_option("--max-refine", cfg.max_refine, "bisection depth for ambiguous matches")
        ->check(CLI::Range(0, 60))
        ->capture_default_str();
    app->add_flag("!--no-richardson", cfg.richardson, "skip the 2m+1 grid check");
    app->add_flag("!--no-cross-check", cfg.cross_check, "skip the determinant winding check");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree-theoretic Morse index and spectral flow for non-selfadjoint Sturm-Liouville systems"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--threads", cfg.threads, "worker threads; 0 uses the hardware count")->capture_default_str();
    app.add_option("-o,--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_flag("--csv", cfg.csv, "also write CSV traces");
    app.add_option("--steps", cfg.steps, "RK4 steps over [0, length]; 0 uses the problem default")
        ->check(CLI::NonNegativeNumber);

    auto* degree = app.add_subcommand("degree", "deg(rho, Omega, 0) by argument tracking");
    auto* morse = app.add_subcommand("morse", "Morse index as the degree of det G over V");
    auto* sf = app.add_subcommand("sf", "spectral flow of the discretised path");
    auto* conj = app.add_subcommand("conjugates", "conjugate points of the Dirichlet problem");
    auto* rd = app.add_subcommand("rd-analyze", "planar reaction-diffusion analysis");
    auto* verify = app.add_subcommand("verify", "cross-check degree, oracle and analytic routes");

    for (auto* sub : {degree, morse, sf, conj, rd, verify})
        sub->add_option("problem", cfg.problem, "problem JSON file")->required()->check(CLI::ExistingFile);

    add_rectangle_flags(degree, cfg);
    add_winding_flags(degree, cfg);
    degree->add_flag("!--no-localize", cfg.localize, "skip zero localisation");
    degree->add_option("--min-cell", cfg.localize_options.min_relative_size, "smallest cell relative to the rectangle")
        ->check(CLI::Range(1e-12, 0.5))
        ->capture_default_str();

    add_morse_flags(morse, cfg);
    add_winding_flags(morse, cfg);

    add_rectangle_flags(sf, cfg);
    add_oracle_flags(sf, cfg);

    add_morse_flags(conj, cfg);
    conj->add_option("--x-max", cfg.x_max, "scan range (0, x_max]; 0 uses the length")->check(CLI::NonNegativeNumber);

    add_oracle_flags(rd, cfg);

    add_rectangle_flags(verify, cfg);
    add_morse_flags(verify, cfg);
    add_winding_flags(verify, cfg);
    add_oracle_flags(verify, cfg);

    CLI11_PARSE(app, argc, argv);
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    json payload;
    int status = 0;
    try {
        if (cfg.threads > 0) set_thread_count(cfg.threads);
        fs::create_directories(cfg.out_dir);
        ProblemSpec spec = load_problem(cfg.problem);
        if (cfg.steps > 0) spec.steps_per_unit = cfg.steps / spec.length;
        if (cfg.command == "degree")
            payload = run_degree(spec, cfg);
        else if (cfg.command == "morse")
            payload = run_morse(spec, cfg);
        else if (cfg.command == "sf")
            payload = run_sf(spec, cfg);
        else if (cfg.command == "conjugates")
            payload = run_conjugates(spec, cfg);
        else if (cfg.command == "rd-analyze")
            payload = run_rd(spec, cfg);
        else {
            bool all_pass = false;
            payload = run_verify(spec, cfg, all_pass);
            if (!all_pass) status = 1;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << ", precondition '" << e.precondition()
                  << "'): " << e.what() << "\n";
        payload = {{"error", to_json(e)}};
        status = is_ill_posed(e.kind()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        payload = {{"error", {{"kind", "internal"}, {"message", e.what()}}}};
        status = 1;
    }

    try {
        const fs::path dir(cfg.out_dir);
        write_file(dir / (cfg.command + ".json"), dump(envelope(cfg.command, payload)));
        std::vector<std::string> args(argv, argv + argc);
        const json meta = {{"command", cfg.command},
                           {"problem", cfg.problem},
                           {"argv", args},
                           {"threads", thread_count()},
                           {"exit_status", status},
                           {"timestamp", utc_timestamp()}};
        write_file(dir / (cfg.command + ".meta.json"), dump(meta));
    } catch (const std::exception& e) {
        std::cerr << "cannot write results: " << e.what() << "\n";
        if (status == 0) status = 1;
    }
    return status;
}
