#pragma once

#include <iosfwd>
#include <vector>

#include "nsmorse/boundary.hpp"
#include "nsmorse/degree.hpp"
#include "nsmorse/problem.hpp"

namespace nsmorse {

struct ConjugatePoint {
    double x = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double ratio = 0.0;     // σ_min(G₀(x)) / σ_max(ψ₀(x))
    int multiplicity = 0;   // rank deficiency of G₀(x)
    int local_degree = 0;
};

struct ConjugateReport {
    std::vector<ConjugatePoint> points;
    std::vector<ZeroCell> zero_cells;  // filled when on-axis points do not account for the total
    double delta = 0.0;
    double strip_height = 0.0;
    double t = 0.0;
    int total_degree = 0;
    int local_sum = 0;
};

struct MorseOptions {
    double t = 0.0;             // path parameter of the operator
    double delta = 0.0;         // 0 selects δ automatically
    double strip_height = 0.0;  // 0 uses the default M
    int scan_samples = 4096;
    double root_tolerance = 1e-7;  // accept a scanned minimum when σ_min/σ_max is below this
    double rank_tolerance = 1e-7;  // singular values of G₀ below this·σ_max(ψ₀) count toward multiplicity
    int steps = 0;
    WindingOptions winding;
};

/// Roots of det G₀(x) on (0, x_max), located as minima of σ_min(G₀)/σ_max(ψ₀) and
/// refined by golden-section search.
std::vector<ConjugatePoint> scan_conjugate_points(const ProblemSpec& spec, double x_max, int samples = 4096,
                                                  double t = 0.0);
std::vector<ConjugatePoint> scan_conjugate_points(const DeterminantMap& map, double t, double x_max,
                                                  const MorseOptions& opts);

/// Lower cut δ below which G₀(x) has no conjugate point, checked by monotone
/// growth of σ_min(G₀) on a logarithmic grid.
double select_delta(const DeterminantMap& map, double t, double p_min, double c_sup);

/// Degree of (s, x) ↦ det G_{t+is}(x) on a small square around (0, x0).
int local_degree(const DeterminantMap& map, double t, double x0, double half_size, const WindingOptions& opts = {});

/// Morse index as the degree of det G_{is}(x) over V = [-M, M] × [δ, ℓ].
ConjugateReport morse_via_degree(const ProblemSpec& spec, const MorseOptions& opts = {});

/// Columns: x, det_re, det_im, ratio.
void write_det_g_csv(std::ostream& os, const DeterminantMap& map, double t, double x_max, int samples);

}  // namespace nsmorse
