#pragma once

#include <utility>

#include "nsmorse/problem.hpp"

namespace nsmorse {

/// -𝓛 = -D∂² - V on [0, a] with D = diag(1, d), as a Dirichlet problem with
/// P = D and zeroth-order term L = -V.
class PlanarConstantProblem {
public:
    PlanarConstantProblem(double d, RMatrix V, double a);

    double d() const { return d_; }
    const RMatrix& V() const { return V_; }
    double a() const { return a_; }

    double tr_V() const { return V_(0, 0) + V_(1, 1); }
    double det_V() const { return V_.determinant(); }
    double mass() const { return V_(1, 1) + d_ * V_(0, 0); }  // 𝔐
    double delta1() const { return mass() * mass() - 4.0 * d_ * det_V(); }
    double delta2() const { return 4.0 * d_ * tr_V() - 2.0 * (d_ + 1.0) * mass(); }

    RMatrix P() const;
    RMatrix L() const { return -V_; }

    ProblemSpec to_spec() const;

private:
    double d_;
    RMatrix V_;
    double a_;
};

PlanarConstantProblem planar_from_spec(const ProblemSpec& spec);

/// Eigenvalues of P⁻¹L + isP⁻¹; first carries the + root.
std::pair<cplx, cplx> lambda_pm(const PlanarConstantProblem& problem, double s);

/// φ(λ₊, x)·φ(λ₋, x), the determinant of Σ x^{2k+1}/(2k+1)! (P⁻¹L + isP⁻¹)^k.
cplx det_G_analytic(const PlanarConstantProblem& problem, double s, double x);

/// λ±(s) = a + ibs + o(s): (a, b) for the + and − branches, from the closed
/// form derivative at s = 0. Requires Δ₁ > 0.
struct Linearization {
    double a = 0.0;
    double b = 0.0;
};
std::pair<Linearization, Linearization> linearization(const PlanarConstantProblem& problem);

/// -sgn(ab).
int local_degree_sign(const Linearization& lin);

/// Morse index of a constant-coefficient Dirichlet problem with symmetric Q
/// from the sine modes: eigenvalues of (kπ/ℓ)² P + S + C_t with Re < 0.
int constant_dirichlet_morse_count(const ProblemSpec& spec, double t = 0.0);

struct NilpotentReport {
    int oracle_with = 0;
    int oracle_without = 0;
    int degree_with = 0;
    int degree_without = 0;
    bool pass = false;
};

/// Morse index of -u'' + λu + 𝒩u against -u'' + λu on [0, ℓ] by the oracle and
/// by the degree route.
NilpotentReport nilpotent_invariance_check(double lambda, const RMatrix& nilpotent, double length, int oracle_m = 0);

}  // namespace nsmorse
