#include "nsmorse/constant_analytic.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <sstream>

#include "nsmorse/errors.hpp"
#include "nsmorse/fundamental.hpp"
#include "nsmorse/linalg.hpp"
#include "nsmorse/morse_theorem.hpp"
#include "nsmorse/oracle.hpp"

namespace nsmorse {

PlanarConstantProblem::PlanarConstantProblem(double d, RMatrix V, double a) : d_(d), V_(std::move(V)), a_(a) {
    if (!(d_ > 0.0) || !(a_ > 0.0) || V_.rows() != 2 || V_.cols() != 2 || !V_.allFinite())
        throw Error(ErrorKind::Validation, "d > 0, a > 0, V real 2x2", "invalid planar constant problem");
}

RMatrix PlanarConstantProblem::P() const {
    RMatrix p = RMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    p(1, 1) = d_;
    return p;
}

ProblemSpec PlanarConstantProblem::to_spec() const {
    ProblemSpec spec;
    spec.name = "planar";
    spec.n = 2;
    spec.length = a_;
    spec.P = CoefficientField::constant(P());
    spec.Q = CoefficientField::zero(2);
    spec.S = CoefficientField::zero(2);
    spec.C0 = CoefficientField::constant(L());
    spec.boundary = BoundaryCondition::make(BoundaryPreset::Dirichlet, 2);
    spec.reaction_diffusion = ReactionDiffusionData{d_, V_, a_};
    return spec;
}

PlanarConstantProblem planar_from_spec(const ProblemSpec& spec) {
    if (spec.reaction_diffusion) {
        const auto& rd = *spec.reaction_diffusion;
        return PlanarConstantProblem(rd.d, rd.V, rd.a);
    }
    const auto not_planar = [] {
        return Error(ErrorKind::Validation, "planar-constant-problem",
                     "problem is not of the form -diag(1,d)u'' - Vu with constant data");
    };
    if (spec.n != 2 || !spec.constant_coefficients() || spec.boundary.preset != BoundaryPreset::Dirichlet)
        throw not_planar();
    const RMatrix p = spec.P(0.0);
    if (p(0, 0) != 1.0 || p(0, 1) != 0.0 || p(1, 0) != 0.0 || !spec.Q(0.0).isZero(0.0)) throw not_planar();
    return PlanarConstantProblem(p(1, 1), -spec.zeroth_order(0.0, 0.0), spec.length);
}

std::pair<cplx, cplx> lambda_pm(const PlanarConstantProblem& pr, double s) {
    const double d = pr.d();
    const cplx disc(pr.delta1() - (d - 1.0) * (d - 1.0) * s * s, pr.delta2() * s);
    const cplx root = std::sqrt(disc);
    const cplx base(-pr.mass(), (d + 1.0) * s);
    return {(base + root) / (2.0 * d), (base - root) / (2.0 * d)};
}

cplx det_G_analytic(const PlanarConstantProblem& pr, double s, double x) {
    const auto [lp, lm] = lambda_pm(pr, s);
    return phi_entire(lp, x) * phi_entire(lm, x);
}

std::pair<Linearization, Linearization> linearization(const PlanarConstantProblem& pr) {
    const double d = pr.d();
    const double d1 = pr.delta1();
    if (!(d1 > 0.0))
        throw Error(ErrorKind::Degenerate, "Delta1 > 0", "linearization needs distinct real eigenvalues at s = 0");
    const double r = std::sqrt(d1);
    const double slope = pr.delta2() / (2.0 * r);
    Linearization plus{(-pr.mass() + r) / (2.0 * d), ((d + 1.0) + slope) / (2.0 * d)};
    Linearization minus{(-pr.mass() - r) / (2.0 * d), ((d + 1.0) - slope) / (2.0 * d)};
    return {plus, minus};
}

int local_degree_sign(const Linearization& lin) {
    if (lin.a == 0.0 || lin.b == 0.0)
        throw Error(ErrorKind::Degenerate, "a != 0 and b != 0", "degenerate linearization of lambda(s)");
    return (lin.a * lin.b > 0.0) ? -1 : 1;
}

int constant_dirichlet_morse_count(const ProblemSpec& input, double t) {
    const ProblemSpec spec = frozen_at(input, t);
    const ValidationReport report = require_valid(spec);
    if (!modal_eligible(spec))
        throw Error(ErrorKind::Validation, "constant Dirichlet problem with symmetric Q",
                    "sine-mode count needs constant coefficients, the Dirichlet preset and symmetric Q");
    if (!report.p_positive_definite)
        throw Error(ErrorKind::Precondition, "P positive definite", "sine-mode count needs P > 0");
    const RMatrix P = spec.P(0.0);
    const RMatrix Z = spec.zeroth_order(0.0, t);
    const double z_norm = spectral_norm(Z);
    int count = 0;
    for (int k = 1;; ++k) {
        const double theta = (k * kPi / spec.length) * (k * kPi / spec.length);
        if (theta * report.p_min_eigenvalue > z_norm) break;
        const Eigen::EigenSolver<RMatrix> es(theta * P + Z, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double re = es.eigenvalues()(i).real();
            if (std::abs(es.eigenvalues()(i)) <= 1e-12 * std::max(1.0, theta))
                throw Error(ErrorKind::Degenerate, "ker A_t = {0}", "operator has a zero eigenvalue");
            if (re < 0.0) ++count;
        }
    }
    return count;
}

NilpotentReport nilpotent_invariance_check(double lambda, const RMatrix& nilpotent, double length, int oracle_m) {
    const Eigen::Index n = nilpotent.rows();
    if (n < 1 || nilpotent.cols() != n)
        throw Error(ErrorKind::Validation, "square nilpotent", "nilpotent part must be square");
    RMatrix power = RMatrix::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) power = power * nilpotent;
    if (!power.isZero(1e-12 * std::max(1.0, nilpotent.cwiseAbs().maxCoeff())))
        throw Error(ErrorKind::Validation, "nilpotent^N = 0", "supplied matrix is not nilpotent");

    const auto make = [&](const RMatrix& extra) {
        ProblemSpec spec;
        spec.name = "nilpotent";
        spec.n = static_cast<int>(n);
        spec.length = length;
        spec.P = CoefficientField::constant(RMatrix::Identity(n, n));
        spec.Q = CoefficientField::zero(spec.n);
        spec.S = CoefficientField::zero(spec.n);
        RMatrix c0 = lambda * RMatrix::Identity(n, n) + extra;
        spec.C0 = CoefficientField::constant(c0);
        spec.boundary = BoundaryCondition::make(BoundaryPreset::Dirichlet, spec.n);
        return spec;
    };
    const ProblemSpec with = make(nilpotent);
    const ProblemSpec without = make(RMatrix::Zero(n, n));

    OracleOptions oopts;
    oopts.m = oracle_m;
    NilpotentReport r;
    r.oracle_with = morse_index(with, 0.0, oopts).index;
    r.oracle_without = morse_index(without, 0.0, oopts).index;
    r.degree_with = morse_via_degree(with).total_degree;
    r.degree_without = morse_via_degree(without).total_degree;
    r.pass = r.oracle_with == r.oracle_without && r.degree_with == r.degree_without && r.oracle_with == r.degree_with;
    if (!r.pass) {
        std::ostringstream os;
        os << "Morse indices differ: oracle " << r.oracle_with << " / " << r.oracle_without << ", degree "
           << r.degree_with << " / " << r.degree_without;
        throw Error(ErrorKind::Mismatch, "nilpotent-invariance", os.str());
    }
    return r;
}

}  // namespace nsmorse
