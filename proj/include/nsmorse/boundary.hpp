#pragma once

#include <iosfwd>
#include <vector>

#include "nsmorse/fundamental.hpp"
#include "nsmorse/linalg.hpp"
#include "nsmorse/problem.hpp"

namespace nsmorse {

struct DeterminantSample {
    cplx z;
    cplx rho;
    double log_abs_rho = 0.0;
    double arg_rho = 0.0;
};

/// R_z = R0 + R1 ψ_z(ℓ), z = t + is.
CMatrix boundary_matrix(const ProblemSpec& spec, cplx z);

/// ρ(z) = det R_z; Dirichlet problems use (-1)^N det G_z(ℓ).
DeterminantSample rho(const ProblemSpec& spec, cplx z);

/// Evaluates ρ and det G for one problem, sharing a Propagator.
class DeterminantMap {
public:
    explicit DeterminantMap(const ProblemSpec& spec, int steps = 0);

    LogDet rho(double t, double s) const;
    LogDet rho_full(double t, double s) const;

    /// G_{t+is}(x) and its determinant, for the (s, x) Morse map.
    CMatrix G(double t, double s, double x) const;
    LogDet det_G(double t, double s, double x) const;

    const Propagator& propagator() const { return prop_; }
    bool dirichlet() const { return dirichlet_; }

private:
    Propagator prop_;
    RMatrix R0_;
    RMatrix R1_;
    int n_;
    bool dirichlet_;
};

/// Largest relative disagreement |ρ_reduced − ρ_full| / max(|ρ_full|, tiny)
/// over the given points; only meaningful for the Dirichlet preset.
double dirichlet_consistency(const DeterminantMap& map, const std::vector<cplx>& zs);

DeterminantSample to_sample(cplx z, const LogDet& d);

/// Columns: z_re, z_im, rho_re, rho_im.
void write_rho_csv(std::ostream& os, const std::vector<DeterminantSample>& samples);

}  // namespace nsmorse
