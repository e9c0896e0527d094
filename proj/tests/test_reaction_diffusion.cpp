#include "doctest.h"
#include "fixtures.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/morse_theorem.hpp"
#include "nsmorse/oracle.hpp"
#include "nsmorse/reaction_diffusion.hpp"
#include "oracle_values.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace nsmorse;
using fixtures::mat2;

namespace {

// d = 1/2, 𝔐 = 1/4, √Δ₁ = 5𝔐/13: λ₊ = -2/13, λ₋ = -9/26, ratio 9/4.
PlanarConstantProblem non_generic(double a) {
    const double v21 = (0.75 + 9.0 / 338.0) / 2.0;
    return {0.5, mat2(-1.0, -2.0, v21, 0.75), a};
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Mismatch;
}

}  // namespace

TEST_CASE("Turing conditions") {
    const TuringReport cx2 = turing_check(fixtures::counterexample2());
    CHECK(cx2.holds());
    CHECK(cx2.tr_V == doctest::Approx(-0.25));
    CHECK(cx2.det_V == doctest::Approx(1.0 / 64.0));
    CHECK(cx2.mass == doctest::Approx(0.25));
    CHECK(cx2.mass > std::sqrt(2.0) / 8.0);
    CHECK(cx2.delta1_positive);
    CHECK(cx2.mass_positive);

    const TuringReport cx1 = turing_check(fixtures::counterexample1());
    CHECK_FALSE(cx1.trace_negative);
    CHECK_FALSE(cx1.stable_without_diffusion());

    const TuringReport minus_identity = turing_check({2.0, -RMatrix::Identity(2, 2), 1.0});
    CHECK(minus_identity.stable_without_diffusion());
    CHECK_FALSE(minus_identity.diffusive);
    CHECK(minus_identity.mass == -3.0);

    const TuringReport equal = turing_check({1.0, mat2(-1.0, -2.0, 1.0, 0.5), 1.0});
    CHECK(equal.stable_without_diffusion());
    CHECK_FALSE(equal.diffusive);
    CHECK_FALSE(equal.note.empty());
}

TEST_CASE("diffusive condition is equivalent to the two-flag form") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        const TuringReport r = turing_check({0.05 + std::abs(u(rng)), mat2(u(rng), u(rng), u(rng), u(rng)), 1.0});
        if (!(r.det_V > 0.0)) continue;
        CHECK(r.diffusive == (r.delta1_positive && r.mass_positive));
    }
}

TEST_CASE("negative eigenvalue count of the second counterexample") {
    const EigenCountReport r = count_negative_eigenvalues(fixtures::counterexample2());
    CHECK(r.count == 2);
    CHECK(r.lower == doctest::Approx(oracle::cx2::threshold_lower).epsilon(1e-14));
    CHECK(r.upper == doctest::Approx(oracle::cx2::threshold_upper).epsilon(1e-14));
    REQUIRE(r.roster.size() == 2);
    CHECK(r.roster[0].k == 2);
    CHECK(r.roster[1].k == 3);
    for (const auto& e : r.roster) {
        CHECK(e.residual < 1e-10);
        CHECK(e.lambda < 0.0);
    }
    OracleOptions o;
    o.m = 6400;
    o.richardson = false;
    const MorseResult m = morse_index(fixtures::counterexample2().to_spec(), 0.0, o);
    REQUIRE(m.negative.size() == 2);
    std::vector<double> discrete{m.negative[0].real(), m.negative[1].real()};
    std::sort(discrete.begin(), discrete.end());
    std::vector<double> roster{r.roster[0].lambda, r.roster[1].lambda};
    std::sort(roster.begin(), roster.end());
    for (int i = 0; i < 2; ++i) CHECK(std::abs(discrete[static_cast<std::size_t>(i)] - roster[static_cast<std::size_t>(i)]) < 1e-5);
    CHECK(m.max_abs_im_negative < 1e-6);
}

TEST_CASE("count errors and small intervals") {
    CHECK(kind_of([] { count_negative_eigenvalues(fixtures::counterexample1()); }) == ErrorKind::TuringViolated);
    CHECK(count_negative_eigenvalues(fixtures::counterexample2(0.5)).count == 0);
    const auto [lp, lm] = lambda_pm(fixtures::counterexample2(), 0.0);
    const double a = 2.0 * kPi / std::sqrt(-lm.real());
    CHECK(kind_of([&] { count_negative_eigenvalues(fixtures::counterexample2(a)); }) == ErrorKind::DegenerateThreshold);
}

TEST_CASE("count follows the two floor terms and can drop as the interval grows") {
    const auto [lp, lm] = lambda_pm(fixtures::counterexample2(), 0.0);
    const double r_minus = std::sqrt(-lm.real()) / kPi;
    const double r_plus = std::sqrt(-lp.real()) / kPi;
    int checked = 0;
    for (double a = 1.0; a < 60.0; a += 0.37) {
        try {
            const int c = count_negative_eigenvalues(fixtures::counterexample2(a)).count;
            CHECK(c == static_cast<int>(std::floor(a * r_minus)) - static_cast<int>(std::floor(a * r_plus)));
            ++checked;
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateThreshold);
        }
    }
    CHECK(checked > 100);
    // k = 1 leaves the window at a = π/√(-λ₊) ≈ 11.61 before k = 3 enters at ≈ 14.43.
    CHECK(count_negative_eigenvalues(fixtures::counterexample2(11.5)).count == 2);
    CHECK(count_negative_eigenvalues(fixtures::counterexample2(11.7)).count == 1);
}

TEST_CASE("conjugate sets of the second counterexample") {
    const ConjugateSets s = conjugate_sets(fixtures::counterexample2());
    REQUIRE(s.C1.size() == 3);
    REQUIRE(s.C2.size() == 1);
    CHECK(s.C3.empty());
    for (int k = 0; k < 3; ++k)
        CHECK(s.C1[static_cast<std::size_t>(k)] == doctest::Approx(oracle::cx2::C1[static_cast<std::size_t>(k)]).epsilon(1e-14));
    CHECK(s.C2[0] == doctest::Approx(oracle::cx2::C2[0]).epsilon(1e-14));
    CHECK(s.count_with_multiplicity == 4);
    CHECK(s.count_without_multiplicity == 4);

    const auto points = scan_conjugate_points(fixtures::counterexample2().to_spec(), 16.0);
    REQUIRE(points.size() == 4);
    std::vector<double> expected{s.C1[0], s.C1[1], s.C2[0], s.C1[2]};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(points[i].x - expected[i]) < 1e-8);
}

TEST_CASE("non-generic configuration has a shared conjugate point") {
    const auto pr = non_generic(20.0);
    REQUIRE(turing_check(pr).holds());
    const auto [lp, lm] = lambda_pm(pr, 0.0);
    CHECK(lm.real() / lp.real() == doctest::Approx(9.0 / 4.0).epsilon(1e-14));
    const ConjugateSets s = conjugate_sets(pr);
    REQUIRE(s.C3.size() == 1);
    CHECK(s.C3_indices[0] == std::make_pair(3, 2));
    CHECK(s.C3[0] == doctest::Approx(kPi * std::sqrt(26.0)).epsilon(1e-13));
    CHECK(s.count_with_multiplicity - s.count_without_multiplicity == 1);
    for (double x : s.C3) {
        CHECK(std::any_of(s.C1.begin(), s.C1.end(), [&](double y) { return std::abs(x - y) < 1e-12 * x; }));
        CHECK(std::any_of(s.C2.begin(), s.C2.end(), [&](double y) { return std::abs(x - y) < 1e-12 * x; }));
    }

    const auto points = scan_conjugate_points(pr.to_spec(), pr.a());
    CHECK(static_cast<int>(points.size()) == s.count_without_multiplicity);
    int with = 0;
    for (const auto& p : points) with += p.multiplicity;
    CHECK(with == s.count_with_multiplicity);

    CHECK(local_degree_table(pr, s.C3[0]) == 0);
    CHECK(numerical_local_degree(pr, s.C3[0]) == 0);
    CHECK(degree_equals_negative_count(pr).pass);
}

TEST_CASE("local degree table follows the branch signs") {
    const auto pr = fixtures::counterexample2();
    const ConjugateSets s = conjugate_sets(pr);
    for (double x : s.C1) {
        CHECK(local_degree_table(pr, x) == 1);
        CHECK(numerical_local_degree(pr, x) == 1);
    }
    for (double x : s.C2) {
        CHECK(local_degree_table(pr, x) == -1);
        CHECK(numerical_local_degree(pr, x) == -1);
    }
    CHECK(kind_of([&] { local_degree_table(pr, 7.0); }) == ErrorKind::NotConjugatePoint);
}

TEST_CASE("index identity on the examples") {
    const IdentityReport r = degree_equals_negative_count(fixtures::counterexample2());
    CHECK(r.pass);
    CHECK(r.c1_minus_c2 == 2);
    CHECK(r.negative_count == 2);
    CHECK(r.degree == 2);
    CHECK(r.oracle == 2);

    const auto [lp, lm] = lambda_pm(fixtures::counterexample2(), 0.0);
    const double first = kPi / std::sqrt(-lm.real());
    const IdentityReport one = degree_equals_negative_count(fixtures::counterexample2(first * 1.05));
    CHECK(one.pass);
    CHECK(one.c1_minus_c2 == 1);

    const IdentityReport none = degree_equals_negative_count(fixtures::counterexample2(2.0));
    CHECK(none.pass);
    CHECK(none.degree == 0);
}

TEST_CASE("index identity on a small random Turing family") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int accepted = 0;
    int attempts = 0;
    while (accepted < 12 && ++attempts < 20000) {
        const double d = 0.05 + 0.5 * u(rng);
        const RMatrix V = mat2(-0.5 - 1.5 * u(rng), -0.5 - 2.0 * u(rng), 0.1 + u(rng), 0.2 + u(rng));
        const PlanarConstantProblem probe(d, V, 1.0);
        if (!turing_check(probe).holds()) continue;
        const PlanarConstantProblem pr(d, V, 3.0 + 10.0 * u(rng));
        try {
            const IdentityReport r = degree_equals_negative_count(pr, 0, false);
            CHECK(r.pass);
            CHECK(r.oracle_max_abs_im < 1e-6);
            ++accepted;
        } catch (const Error& e) {
            INFO(std::string(e.what()));
            CHECK(e.kind() == ErrorKind::DegenerateThreshold);
        }
    }
    CHECK(accepted == 12);
}
