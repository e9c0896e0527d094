#include "doctest.h"
#include "fixtures.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/linalg.hpp"
#include "nsmorse/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

using namespace nsmorse;
using fixtures::mat2;

namespace {

std::vector<double> sorted_real(const std::vector<cplx>& values) {
    std::vector<double> out;
    for (const cplx& z : values) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    return out;
}

ProblemSpec variable_problem() {
    ProblemSpec spec;
    spec.n = 2;
    spec.length = 1.5;
    spec.P = CoefficientField::polynomial({mat2(1.0, 0.2, 0.2, 2.0), mat2(0.5, 0.0, 0.0, -0.3)});
    spec.Q = CoefficientField::polynomial({mat2(0.0, 1.0, -0.5, 0.3), mat2(0.2, 0.0, 0.4, 0.0)});
    spec.S = CoefficientField::constant(mat2(0.5, 0.1, 0.1, -1.0));
    spec.C0 = CoefficientField::polynomial({mat2(-3.0, 2.0, -1.0, 0.0), mat2(0.0, 0.0, 1.5, 0.0)});
    spec.boundary = BoundaryCondition::make(BoundaryPreset::Dirichlet, 2);
    return spec;
}

}  // namespace

TEST_CASE("discrete Dirichlet Laplacian eigenvalues") {
    const auto spec = fixtures::constant_problem(fixtures::scalar(1.0), fixtures::scalar(0.0), kPi);
    const int m = 199;
    const auto ev = sorted_real(spectrum(spec, 0.0, m).eigenvalues);
    REQUIRE(ev.size() == static_cast<std::size_t>(m));
    CHECK(std::abs(ev[0] - 1.0) < 1e-3);
    const double h = kPi / (m + 1);
    for (int k = 1; k <= m; k += 17) {
        const double exact = 4.0 / (h * h) * std::pow(std::sin(k * kPi / (2.0 * (m + 1))), 2);
        CHECK(ev[static_cast<std::size_t>(k - 1)] == doctest::Approx(exact).epsilon(1e-11));
    }
}

TEST_CASE("modal blocks reproduce the dense stencil spectrum") {
    auto spec = fixtures::counterexample2(3.0).to_spec();
    spec.Q = CoefficientField::constant(mat2(0.7, 0.2, 0.2, -0.4));
    REQUIRE(modal_eligible(spec));
    const Discretization modal = discretize(spec, 0.0, 40);
    const Discretization dense = discretize(spec, 0.0, 40, true);
    CHECK(modal.modal);
    const Eigen::ComplexEigenSolver<CMatrix> es(dense.assembled(0.0), false);
    std::vector<cplx> dense_ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    const auto modal_ev = spectrum(modal).eigenvalues;
    REQUIRE(modal_ev.size() == dense_ev.size());
    for (const cplx& z : modal_ev) {
        double best = 1e300;
        for (const cplx& w : dense_ev) best = std::min(best, std::abs(z - w));
        CHECK(best < 1e-8 * std::max(1.0, std::abs(z)));
    }
    for (double s : {0.0, 1.7, -4.0}) {
        const cplx a = shifted_log_det(modal, s).value();
        const cplx b = log_determinant(dense.assembled(s)).value();
        CHECK(std::abs(a - b) < 1e-9 * std::abs(b));
    }
}

TEST_CASE("banded determinant of the dense form matches Eigen") {
    const auto spec = variable_problem();
    REQUIRE_FALSE(modal_eligible(spec));
    const Discretization disc = discretize(spec, 0.0, 30);
    const CMatrix A = disc.assembled(0.8);
    const LogDet band = shifted_log_det(disc, 0.8);
    const LogDet dense = log_determinant(A);
    CHECK(band.log_abs == doctest::Approx(dense.log_abs).epsilon(1e-10));
    CHECK(std::abs(principal_angle(band.arg - dense.arg)) < 1e-9);
}

TEST_CASE("shift and conjugation properties of the spectrum") {
    const auto spec = variable_problem();
    const Discretization disc = discretize(spec, 0.0, 25);
    const CMatrix A0 = disc.assembled(0.0);
    CHECK(A0.imag().norm() == 0.0);
    const CMatrix As = disc.assembled(2.5);
    CHECK((As - A0 - cplx(0, 2.5) * CMatrix::Identity(A0.rows(), A0.cols())).norm() < 1e-12);
    const auto ev = spectrum(disc).eigenvalues;
    CHECK(ev.size() == static_cast<std::size_t>(25 * 2));
    for (const cplx& z : ev) {
        double best = 1e300;
        for (const cplx& w : ev) best = std::min(best, std::abs(std::conj(z) - w));
        CHECK(best < 1e-8 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("stencil is second-order accurate") {
    const auto spec = fixtures::minus_c(0.0);
    const double e1 = sorted_real(spectrum(spec, 0.0, 49).eigenvalues)[1] - 4.0;
    const double e2 = sorted_real(spectrum(spec, 0.0, 99).eigenvalues)[1] - 4.0;
    CHECK(std::abs(e1 / e2) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("Morse index examples") {
    CHECK(morse_index(fixtures::minus_c(12.0), 0.0).index == 3);
    const MorseResult cx1 = morse_index(fixtures::counterexample1().to_spec(), 0.0);
    CHECK(cx1.index == 5);
    CHECK(cx1.max_abs_im_negative < 1e-6);
    const MorseResult cx2 = morse_index(fixtures::counterexample2().to_spec(), 0.0);
    CHECK(cx2.index == 2);
    CHECK(cx2.max_abs_im_negative < 1e-6);
}

TEST_CASE("oracle preconditions") {
    auto neumann = fixtures::minus_c(12.0);
    neumann.boundary = BoundaryCondition::make(BoundaryPreset::Neumann, 1);
    try {
        morse_index(neumann, 0.0);
        FAIL("accepted Neumann");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(e.precondition() == "dirichlet-boundary");
    }

    auto floor = fixtures::minus_c(12.0);
    floor.eigenvalue_floor = 5.0;
    try {
        morse_index(floor, 0.0);
        FAIL("floor not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }

    // k = 2 gives the eigenvalue 0; its discrete counterpart is inside gap_tolerance.
    try {
        morse_index(fixtures::minus_c(4.0), 0.0);
        FAIL("degenerate operator accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }

    const auto spec = fixtures::minus_c(12.0, 15.0);
    Rectangle omega = default_rectangle(spec);
    omega.t_min = 8.0 / 15.0;
    CHECK_THROWS_AS(spectral_flow(spec, omega), Error);
}

TEST_CASE("spectral flow examples") {
    const auto spec = fixtures::minus_c(12.0, 15.0);
    const Rectangle omega = default_rectangle(spec);
    const CrossingLedger ledger = spectral_flow(spec, omega);
    CHECK(ledger.net == 3);
    CHECK(ledger.morse_start == 3);
    CHECK(ledger.morse_end == 0);
    CHECK(ledger.det_winding == 3);
    CHECK(ledger.cross_checked);
    REQUIRE(ledger.crossings.size() == 3);
    for (const auto& c : ledger.crossings) CHECK(c.direction == 1);

    const SfMorseReport report = verify_sf_morse(spec, omega);
    CHECK(report.pass);
    CHECK(report.sf == 3);

    const auto reversed = reversed_path(spec, omega.t_min, omega.t_max);
    CHECK(spectral_flow(reversed, omega).net == -3);

    const auto constant = fixtures::minus_c(12.5, 0.0);
    CHECK(spectral_flow(constant, default_rectangle(constant)).net == 0);
}

TEST_CASE("counterexample 1 family has flow 5") {
    // C_t = -V (1 - t) + t K I with K large.
    auto spec = fixtures::counterexample1().to_spec();
    const RMatrix V = fixtures::counterexample1().V();
    spec.path.shift = 40.0;
    spec.path.direction = CoefficientField::constant(V);
    const Rectangle omega = default_rectangle(spec);
    const CrossingLedger ledger = spectral_flow(spec, omega);
    CHECK(ledger.morse_start == 5);
    CHECK(ledger.morse_end == 0);
    CHECK(ledger.net == 5);
}

TEST_CASE("non-constant path flow agrees with the endpoint indices") {
    auto spec = variable_problem();
    spec.path.shift = 30.0;
    spec.path.offset = -1.0;
    spec.path.scale = 2.0;
    const Rectangle omega = default_rectangle(spec);
    OracleOptions o;
    o.m = 200;
    const CrossingLedger ledger = spectral_flow(spec, omega, o);
    CHECK(ledger.net == ledger.morse_start - ledger.morse_end);
    CHECK(ledger.net == ledger.det_winding);
    CHECK(ledger.morse_start > 0);
}

TEST_CASE("trajectory recording") {
    const auto spec = fixtures::minus_c(12.0, 15.0);
    OracleOptions o;
    o.m = 60;
    o.record_trajectories = true;
    const CrossingLedger ledger = spectral_flow(spec, default_rectangle(spec), o);
    CHECK_FALSE(ledger.trajectories.empty());
    std::ostringstream os;
    write_trajectory_csv(os, ledger.trajectories);
    CHECK(os.str().rfind("t,k,re,im\n", 0) == 0);
}
