#include "doctest.h"
#include "fixtures.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/linalg.hpp"
#include "nsmorse/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace nsmorse;
using fixtures::mat2;

namespace {

bool has_violation(const ValidationReport& r, const std::string& needle) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("polynomial fields evaluate by Horner") {
    const auto f = CoefficientField::polynomial({mat2(1, 0, 0, 2), mat2(0, 1, 0, 0), mat2(0, 0, 3, 0)});
    const RMatrix v = f(2.0);
    CHECK(v(0, 0) == 1.0);
    CHECK(v(0, 1) == 2.0);
    CHECK(v(1, 0) == 12.0);
    CHECK(v(1, 1) == 2.0);
    CHECK_FALSE(f.is_constant());
    CHECK(CoefficientField::polynomial({mat2(1, 2, 3, 4)}).is_constant());
}

TEST_CASE("grid fields interpolate the nodes and reproduce linear data") {
    std::vector<double> nodes{0.0, 0.3, 1.1, 2.0};
    std::vector<RMatrix> values;
    for (double x : nodes) values.push_back(fixtures::scalar(2.0 - 3.0 * x));
    const auto f = CoefficientField::grid(nodes, values);
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(f(nodes[i])(0, 0) == doctest::Approx(values[i](0, 0)));
    for (double x : {0.1, 0.77, 1.5, 1.99}) CHECK(f(x)(0, 0) == doctest::Approx(2.0 - 3.0 * x).epsilon(1e-13));

    const auto two = CoefficientField::grid({0.0, 1.0}, {fixtures::scalar(1.0), fixtures::scalar(3.0)});
    CHECK(two(0.25)(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("grid spline matches a natural cubic spline oracle") {
    // Natural spline through (0,0), (1,1), (2,0): M1 = -3, so s(0.5) = 0.6875.
    const auto f = CoefficientField::grid({0.0, 1.0, 2.0}, {fixtures::scalar(0), fixtures::scalar(1), fixtures::scalar(0)});
    CHECK(f(0.5)(0, 0) == doctest::Approx(0.6875).epsilon(1e-14));
    CHECK(f(1.5)(0, 0) == doctest::Approx(0.6875).epsilon(1e-14));
}

TEST_CASE("validate accepts the negative-degree example") {
    const ValidationReport r = validate(fixtures::negative_degree_example());
    CHECK(r.ok());
    CHECK(std::isfinite(r.c_sup));
    CHECK(r.p_positive_definite);
    CHECK(r.p_min_eigenvalue == doctest::Approx(0.5));
}

TEST_CASE("validate rejects a zero principal symbol") {
    auto spec = fixtures::negative_degree_example();
    spec.P = CoefficientField::constant(RMatrix::Zero(2, 2));
    const ValidationReport r = validate(spec);
    CHECK_FALSE(r.ok());
    CHECK(has_violation(r, "P not invertible"));
    CHECK_THROWS_AS(require_valid(spec), Error);
}

TEST_CASE("validate rejects a one-node grid and asymmetric data") {
    auto spec = fixtures::minus_c(12.0);
    spec.C0 = CoefficientField::grid({0.0}, {fixtures::scalar(1.0)});
    CHECK_FALSE(validate(spec).ok());

    auto asym = fixtures::negative_degree_example();
    asym.P = CoefficientField::constant(mat2(1, 0.5, 0, 1));
    CHECK(has_violation(validate(asym), "P not symmetric"));
    asym = fixtures::negative_degree_example();
    asym.S = CoefficientField::constant(mat2(0, 1, 0, 0));
    CHECK(has_violation(validate(asym), "S not symmetric"));

    auto short_grid = fixtures::minus_c(12.0);
    short_grid.C0 = CoefficientField::grid({0.0, 1.0}, {fixtures::scalar(1.0), fixtures::scalar(2.0)});
    CHECK_FALSE(validate(short_grid).ok());
}

TEST_CASE("indefinite P is valid but flagged") {
    auto spec = fixtures::negative_degree_example();
    spec.P = CoefficientField::constant(mat2(1, 0, 0, -1));
    const ValidationReport r = validate(spec);
    CHECK(r.ok());
    CHECK_FALSE(r.p_positive_definite);
}

TEST_CASE("strip height is twice the zeroth-order norm") {
    const auto spec = fixtures::constant_problem(RMatrix::Identity(2, 2), mat2(3, 0, 0, -1), 1.0);
    CHECK(default_strip_height(spec) == doctest::Approx(6.0));

    const auto zero = fixtures::constant_problem(RMatrix::Identity(2, 2), RMatrix::Zero(2, 2), 1.0);
    CHECK(default_strip_height(zero) == doctest::Approx(2.0 * kStripFloor));

    const auto cx2 = fixtures::counterexample2().to_spec();
    const RMatrix V = fixtures::counterexample2().V();
    CHECK(default_strip_height(cx2) >= 2.0 * spectral_norm(V));
}

TEST_CASE("strip height dominates the path norm on the validation grid") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 40; ++trial) {
        auto spec = fixtures::constant_problem(RMatrix::Identity(2, 2), mat2(u(rng), u(rng), u(rng), u(rng)), 2.0,
                                               std::abs(u(rng)));
        spec.S = CoefficientField::polynomial({mat2(1, 0.5, 0.5, 0), mat2(u(rng), 0, 0, u(rng))});
        const double M = default_strip_height(spec);
        for (int i = 0; i < kValidationGrid; ++i) {
            const double x = spec.length * i / (kValidationGrid - 1);
            for (double t : {0.0, 1.0}) CHECK(M > spectral_norm(spec.zeroth_order(x, t)));
        }
    }
}

TEST_CASE("presets expand to the block matrices and are recognised") {
    for (int n : {1, 2, 3}) {
        const auto I = RMatrix::Identity(n, n);
        const auto d = BoundaryCondition::make(BoundaryPreset::Dirichlet, n);
        CHECK(d.R0.block(0, n, n, n) == I);
        CHECK(d.R0.block(0, 0, n, n).isZero());
        CHECK(d.R0.bottomRows(n).isZero());
        CHECK(d.R1.block(n, n, n, n) == I);
        CHECK(d.R1.topRows(n).isZero());
        const auto ne = BoundaryCondition::make(BoundaryPreset::Neumann, n);
        CHECK(ne.R0.block(0, 0, n, n) == I);
        CHECK(ne.R1.block(n, 0, n, n) == I);
        const auto p = BoundaryCondition::make(BoundaryPreset::Periodic, n);
        CHECK(p.R0 == RMatrix::Identity(2 * n, 2 * n));
        CHECK(p.R1 == -p.R0);
        for (auto preset : {BoundaryPreset::Dirichlet, BoundaryPreset::Neumann, BoundaryPreset::Periodic}) {
            const auto bc = BoundaryCondition::make(preset, n);
            CHECK(classify_preset(bc.R0, bc.R1) == preset);
            CHECK(parse_preset(to_string(preset)) == preset);
        }
    }
    CHECK(classify_preset(RMatrix::Identity(2, 2), RMatrix::Identity(2, 2)) == BoundaryPreset::Custom);
}

TEST_CASE("path reversal and freezing") {
    auto spec = fixtures::minus_c(12.0, 15.0);
    const auto rev = reversed_path(spec, 0.0, 1.0);
    for (double t : {0.0, 0.3, 1.0})
        CHECK(rev.zeroth_order(0.5, t)(0, 0) == doctest::Approx(spec.zeroth_order(0.5, 1.0 - t)(0, 0)));
    const auto frozen = frozen_at(spec, 0.4);
    CHECK(frozen.zeroth_order(1.0, 0.9)(0, 0) == doctest::Approx(-12.0 + 6.0));
    CHECK(frozen.constant_coefficients());
}

TEST_CASE("problem files round-trip through JSON") {
    auto spec = fixtures::negative_degree_example();
    spec.Q = CoefficientField::polynomial({mat2(0, 1, 0, 0), mat2(0.5, 0, 0, 0)});
    spec.S = CoefficientField::grid({0.0, 2.0, 4.0}, {mat2(1, 0, 0, 1), mat2(2, 0, 0, 2), mat2(0, 1, 1, 0)});
    spec.path.shift = 3.0;
    spec.path.scale = -1.0;
    spec.rectangle = Rectangle{0.0, 1.0, -5.0, 5.0};
    spec.eigenvalue_floor = 40.0;
    const auto back = problem_from_json(problem_to_json(spec));
    CHECK(back.n == 2);
    CHECK(back.length == spec.length);
    CHECK(back.path.shift == 3.0);
    CHECK(back.path.scale == -1.0);
    CHECK(back.rectangle->s_min == -5.0);
    CHECK(*back.eigenvalue_floor == 40.0);
    CHECK(back.boundary.preset == BoundaryPreset::Dirichlet);
    for (double x : {0.0, 0.7, 3.3}) {
        CHECK((back.Q(x) - spec.Q(x)).norm() == 0.0);
        CHECK((back.S(x) - spec.S(x)).norm() < 1e-15);
        CHECK((back.zeroth_order(x, 0.5) - spec.zeroth_order(x, 0.5)).norm() < 1e-15);
    }
    CHECK(problem_to_json(back) == problem_to_json(spec));
}

TEST_CASE("problem files accept flat and scalar matrices and reject malformed ones") {
    const auto flat = problem_from_json(nlohmann::json::parse(R"({
        "schema_version": 1, "n": 2, "length": 1,
        "coefficients": {"P": [1, 0, 0, 2], "C0": {"kind": "constant", "value": [[0, 1], [2, 3]]}},
        "boundary": "neumann"})"));
    CHECK(flat.P(0.0)(1, 1) == 2.0);
    CHECK(flat.C0(0.0)(1, 0) == 2.0);
    CHECK(flat.boundary.preset == BoundaryPreset::Neumann);

    const auto one = problem_from_json(nlohmann::json::parse(
        R"({"schema_version": 1, "n": 1, "length": 2, "coefficients": {"P": 3}, "boundary": {"preset": "periodic"}})"));
    CHECK(one.P(0.0)(0, 0) == 3.0);

    const char* bad[] = {
        R"({"n": 1, "length": 1, "coefficients": {"P": 1}, "boundary": "dirichlet"})",
        R"({"schema_version": 2, "n": 1, "length": 1, "coefficients": {"P": 1}, "boundary": "dirichlet"})",
        R"({"schema_version": 1, "n": 2, "length": 1, "coefficients": {"P": [1, 0, 0]}, "boundary": "dirichlet"})",
        R"({"schema_version": 1, "n": 1, "length": 1, "coefficients": {"P": 1}, "boundary": "robin"})",
        R"({"schema_version": 1, "n": 1, "length": 1, "coefficients": {"P": {"kind": "spline"}}, "boundary": "dirichlet"})",
    };
    for (const char* text : bad) {
        try {
            problem_from_json(nlohmann::json::parse(text));
            FAIL("accepted " << text);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Validation);
            CHECK(e.precondition() == "problem-schema");
        }
    }
}

TEST_CASE("bundled fixtures load and validate") {
    for (const char* name : {"example_negative_degree.json", "counterexample1.json", "counterexample2.json",
                             "scalar_minus_c.json"}) {
        const ProblemSpec spec = load_problem(fixtures::data_file(name));
        CHECK(validate(spec).ok());
    }
    const auto cx2 = load_problem(fixtures::data_file("counterexample2.json"));
    REQUIRE(cx2.reaction_diffusion);
    CHECK((cx2.C0(0.0) + cx2.reaction_diffusion->V).isZero());
}
