#pragma once

#include <iosfwd>
#include <vector>

#include "nsmorse/linalg.hpp"
#include "nsmorse/problem.hpp"

namespace nsmorse {

/// Finite-difference surrogate of the operator at path parameter t with
/// Dirichlet conditions eliminated, unknowns ordered node-major.
///
/// When the coefficients are constant and Q is symmetric the discrete sine
/// transform reduces the matrix to the blocks θ_k P + S + C_t, which are
/// stored instead of the dense matrix.
struct Discretization {
    int m = 0;
    int n = 1;
    double h = 0.0;
    double t = 0.0;
    bool modal = false;
    std::vector<double> theta;    // modal form: θ_k, k = 1..m
    std::vector<RMatrix> blocks;  // modal form: θ_k P + S + C_t
    RMatrix matrix;               // dense form, when requested

    // Stencil blocks per interior node: coupling to j-1, j, j+1.
    std::vector<RMatrix> lower;
    std::vector<RMatrix> diag;
    std::vector<RMatrix> upper;

    /// Dense A_t + is·I assembled from the stencil.
    CMatrix assembled(double s) const;
};

bool modal_eligible(const ProblemSpec& spec);
int default_grid(const ProblemSpec& spec);

/// Requires the Dirichlet preset. `force_dense` fills `matrix` even when the
/// modal form applies.
Discretization discretize(const ProblemSpec& spec, double t, int m, bool force_dense = false);

struct SpectrumSnapshot {
    double t = 0.0;
    std::vector<cplx> eigenvalues;
    std::vector<int> group;  // modal block index, or 0 for the dense form
};

SpectrumSnapshot spectrum(const Discretization& disc);
SpectrumSnapshot spectrum(const ProblemSpec& spec, double t, int m);

/// log det(A_t + is·I).
LogDet shifted_log_det(const Discretization& disc, double s);

/// 10 h² max(1, |λ|).
double gap_tolerance(double h, cplx lambda);

struct OracleOptions {
    int m = 0;               // interior nodes; 0 uses 400·ℓ
    bool richardson = true;  // recompute Morse indices at 2m and require agreement
    int path_steps = 64;
    int max_refine = 16;
    bool cross_check = true;  // compare with the winding of det(A_t + is)
    bool record_trajectories = false;
};

struct MorseResult {
    int index = 0;
    int m = 0;
    double min_abs_re = 0.0;
    double min_re = 0.0;
    double max_abs_im_negative = 0.0;  // largest |Im λ| among Re λ < 0
    std::vector<cplx> negative;        // eigenvalues with Re λ < 0
};

/// Number of discrete eigenvalues with negative real part.
MorseResult morse_index(const ProblemSpec& spec, double t, const OracleOptions& opts = {});

struct Crossing {
    double t = 0.0;
    cplx eigenvalue;
    int direction = 0;  // +1 left to right, -1 right to left
    int multiplicity = 1;
};

struct TrajectoryPoint {
    double t;
    int id;
    cplx lambda;
};

struct CrossingLedger {
    std::vector<Crossing> crossings;
    int net = 0;
    int morse_start = 0;
    int morse_end = 0;
    int det_winding = 0;
    bool cross_checked = false;
    int m = 0;
    int snapshots = 0;
    std::vector<TrajectoryPoint> trajectories;
};

/// Signed imaginary-axis crossings of the discrete spectrum over
/// [omega.t_min, omega.t_max].
CrossingLedger spectral_flow(const ProblemSpec& spec, const Rectangle& omega, const OracleOptions& opts = {});

struct SfMorseReport {
    int sf = 0;
    int morse_start = 0;
    int morse_end = 0;
    int det_winding = 0;
    bool pass = false;
};

/// Checks sf = m⁻(start) − m⁻(end); throws Error(Mismatch) otherwise.
SfMorseReport verify_sf_morse(const ProblemSpec& spec, const Rectangle& omega, const OracleOptions& opts = {});

/// Columns: t, k, re, im.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points);

}  // namespace nsmorse
