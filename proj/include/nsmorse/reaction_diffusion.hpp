#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nsmorse/constant_analytic.hpp"

namespace nsmorse {

struct TuringReport {
    double tr_V = 0.0;
    double det_V = 0.0;
    double mass = 0.0;  // 𝔐 = v₂₂ + d v₁₁
    double delta1 = 0.0;
    bool trace_negative = false;
    bool det_positive = false;
    bool diffusive = false;  // 𝔐 > 2√(d det V)
    bool delta1_positive = false;
    bool mass_positive = false;
    std::string note;

    bool stable_without_diffusion() const { return trace_negative && det_positive; }
    bool holds() const { return stable_without_diffusion() && diffusive; }
};

TuringReport turing_check(const PlanarConstantProblem& problem);

struct RosterEntry {
    int k = 0;
    double mu = 0.0;
    double lambda = 0.0;  // negative root of λ² + ((d+1)μ + tr V)λ + dμ² + 𝔐μ + det V
    double residual = 0.0;
};

struct EigenCountReport {
    double a = 0.0;
    double lower = 0.0;  // (𝔐 − √Δ₁) a² / (2d)
    double upper = 0.0;  // (𝔐 + √Δ₁) a² / (2d)
    int count = 0;
    std::vector<RosterEntry> roster;
};

/// #{k ≥ 1 : lower < k²π² < upper}.
EigenCountReport count_negative_eigenvalues(const PlanarConstantProblem& problem);

struct ConjugateSets {
    std::vector<double> C1;  // zeros of φ(λ₋(0), x) in (0, a)
    std::vector<double> C2;  // zeros of φ(λ₊(0), x) in (0, a)
    std::vector<double> C3;  // points in both
    std::vector<std::pair<int, int>> C3_indices;
    int count_with_multiplicity = 0;
    int count_without_multiplicity = 0;
};

ConjugateSets conjugate_sets(const PlanarConstantProblem& problem);

struct IdentityReport {
    int c1_minus_c2 = 0;
    int negative_count = 0;
    int degree = 0;
    int oracle = 0;
    double oracle_max_abs_im = 0.0;  // largest |Im λ| among oracle eigenvalues with Re λ < 0
    bool pass = false;
};

/// Compares |𝒞₁| − |𝒞₂|, the threshold count, the degree over V and the
/// oracle Morse index. With `strict`, a disagreement throws Error(Mismatch).
IdentityReport degree_equals_negative_count(const PlanarConstantProblem& problem, int oracle_m = 0, bool strict = true);

/// [x₀ is a zero of φ(λ₋(0), ·)] − [x₀ is a zero of φ(λ₊(0), ·)].
int local_degree_table(const PlanarConstantProblem& problem, double x0);

/// Winding of det G_{is}(x) around (0, x0); half_size 0 picks a square that
/// excludes the neighbouring conjugate points.
int numerical_local_degree(const PlanarConstantProblem& problem, double x0, double half_size = 0.0);

}  // namespace nsmorse
