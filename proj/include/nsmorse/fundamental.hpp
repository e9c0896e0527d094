#pragma once

#include <iosfwd>
#include <vector>

#include "nsmorse/linalg.hpp"
#include "nsmorse/problem.hpp"
#include "nsmorse/types.hpp"

namespace nsmorse {

/// J = [[0, -I], [I, 0]].
RMatrix symplectic_j(int n);

/// B_z(x) in the (v, u) ordering, v = P u' + Q u.
CMatrix system_b(const ProblemSpec& spec, double t, double s, double x);

/// JB_z(x), the coefficient of w' = JB_z w.
CMatrix system_matrix(const ProblemSpec& spec, double t, double s, double x);

struct FundamentalSolution {
    cplx z;
    int n = 1;
    std::vector<double> x;
    std::vector<CMatrix> psi;

    const CMatrix& final() const { return psi.back(); }
};

CMatrix block_E(const CMatrix& psi);
CMatrix block_F(const CMatrix& psi);
CMatrix block_G(const CMatrix& psi);
CMatrix block_H(const CMatrix& psi);

/// Classical RK4 with h = x_end / steps; z = t + is.
FundamentalSolution propagate(const ProblemSpec& spec, cplx z, double x_end, int steps);

/// exp(x JB) for Q = 0 and constant data; L is the real zeroth-order matrix,
/// so the lower-left block is Σ x^{2k+1}/(2k+1)! (P⁻¹L + isP⁻¹)^k P⁻¹.
FundamentalSolution matexp_constant(const RMatrix& P, const RMatrix& L, double s, double x);

/// sinh(√λ x)/√λ as an entire function of λ.
cplx phi_entire(cplx lambda, double x);

/// Columns: x, then Re/Im of each entry of ψ in row-major order.
void write_psi_csv(std::ostream& os, const FundamentalSolution& sol);

/// Reusable ψ evaluator for one problem. Coefficients are sampled once at the
/// RK4 nodes and half-nodes; constant problems use the matrix exponential.
class Propagator {
public:
    explicit Propagator(const ProblemSpec& spec, int steps = 0);

    /// ψ_{t+is}(x) for any x in [0, ℓ].
    CMatrix psi(double t, double s, double x) const;

    /// det G_{t+is}(x), integrated on the n-th exterior power of ψ so that
    /// nearly parallel columns of G do not cancel.
    cplx det_G(double t, double s, double x) const;

    /// ψ_{t+is} on the uniform node grid x_k = k·h, k = 0..steps.
    std::vector<CMatrix> trajectory(double t, double s) const;

    bool uses_exponential() const { return constant_; }
    double step() const { return h_; }
    int steps() const { return steps_; }
    const ProblemSpec& spec() const { return spec_; }

private:
    CMatrix generator(std::size_t half_index, double t, double s) const;
    CMatrix generator_at(double x, double t, double s) const;
    CMatrix compound(const CMatrix& a) const { return additive_compound(a, subsets_); }

    ProblemSpec spec_;
    bool constant_ = false;
    int n_ = 1;
    int steps_ = 0;
    double h_ = 0.0;
    RMatrix const_base_;
    RMatrix const_dir_;
    std::vector<RMatrix> base_;  // JB at s = 0, c(t) = 0, on the half-step grid
    std::vector<RMatrix> dir_;   // K·I + D(x) on the half-step grid
    std::vector<std::vector<int>> subsets_;  // n-subsets of {0, ..., 2n-1}
};

}  // namespace nsmorse
