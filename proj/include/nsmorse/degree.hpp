#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "nsmorse/linalg.hpp"
#include "nsmorse/problem.hpp"

namespace nsmorse {

/// Map on a rectangle, returned in log form. Arguments are the horizontal and
/// vertical coordinates.
using LogMap = std::function<LogDet(double h, double v)>;

struct TraceSample {
    double h = 0.0;
    double v = 0.0;
    LogDet value;
};

struct BoundaryTrace {
    std::vector<TraceSample> samples;  // counterclockwise, first sample not repeated
    std::vector<double> increments;    // increments[i] runs from samples[i] to samples[i + 1]
    double total_winding = 0.0;        // radians, before rounding
    double min_log_abs = 0.0;
    double min_margin = 0.0;  // min over samples of log|f| minus its zero threshold
};

struct ZeroCell {
    Rectangle cell;
    int degree = 0;
};

struct DegreeResult {
    int degree = 0;
    BoundaryTrace trace;
    std::vector<ZeroCell> zero_cells;
    double residual = 0.0;
};

struct WindingOptions {
    int samples_per_edge = 64;
    int max_depth = 24;
    double zero_tolerance = 1e-9;  // relative to the local median of |f|
    bool keep_trace = true;
};

struct LocalizeOptions {
    int samples_per_edge = 16;
    double min_relative_size = 1e-3;
    std::size_t max_cells = 256;
};

/// Degree of f on the rectangle by argument tracking along its boundary,
/// traversed counterclockwise starting at (h_min, v_min).
DegreeResult winding(const LogMap& f, const Rectangle& rect, const WindingOptions& opts = {});

/// Convenience overload for a complex map of z = h + iv.
DegreeResult winding(const std::function<cplx(cplx)>& f, const Rectangle& rect, const WindingOptions& opts = {});

/// Recursive quadrisection into cells of nonzero degree whose boundaries stay
/// zero-free. Cells whose split keeps hitting zeros are reported unsplit.
std::vector<ZeroCell> localize_zeros(const LogMap& f, const Rectangle& rect, int degree,
                                     const LocalizeOptions& opts = {});

struct DegreeOptions {
    WindingOptions winding;
    bool localize = true;
    LocalizeOptions localize_options;
    int steps = 0;  // RK4 steps over [0, ℓ]; 0 uses the problem default
};

/// deg(ρ, Ω, 0) in the (t, s)-plane.
DegreeResult degree_index(const ProblemSpec& spec, const Rectangle& omega, const DegreeOptions& opts = {});

/// Columns: h, v, log_abs, arg.
void write_trace_csv(std::ostream& os, const BoundaryTrace& trace);

}  // namespace nsmorse
