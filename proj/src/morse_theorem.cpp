#include "nsmorse/morse_theorem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "nsmorse/errors.hpp"
#include "nsmorse/parallel.hpp"

namespace nsmorse {

namespace {

// Singular values of G(x) measured against σ_max(ψ(x)), which never vanishes.
struct Measure {
    RVector sv;
    double scale = 0.0;
    double ratio() const { return sv(sv.size() - 1) / scale; }
};

Measure measure(const CMatrix& psi) {
    return {singular_values(block_G(psi)), singular_values(psi)(0)};
}

// Golden-section minimisation of a unimodal f on [a, b] to bracket width tol.
double golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

}  // namespace

std::vector<ConjugatePoint> scan_conjugate_points(const DeterminantMap& map, double t, double x_max,
                                                  const MorseOptions& opts) {
    const Propagator& prop = map.propagator();
    std::vector<double> xs;
    std::vector<double> ratios;
    if (prop.uses_exponential()) {
        const int samples = std::max(opts.scan_samples, 16);
        xs.resize(static_cast<std::size_t>(samples));
        ratios.resize(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) {
            xs[i] = x_max * static_cast<double>(i + 1) / samples;
            ratios[i] = measure(prop.psi(t, 0.0, xs[i])).ratio();
        });
    } else {
        const auto traj = prop.trajectory(t, 0.0);
        for (std::size_t k = 1; k < traj.size(); ++k) {
            const double x = prop.step() * static_cast<double>(k);
            if (x > x_max * (1.0 + 1e-12)) break;
            xs.push_back(x);
            ratios.push_back(measure(traj[k]).ratio());
        }
    }

    std::vector<ConjugatePoint> out;
    const auto f = [&](double x) { return measure(prop.psi(t, 0.0, x)).ratio(); };
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        if (!(ratios[i] <= ratios[i - 1] && ratios[i] <= ratios[i + 1])) continue;
        if (ratios[i] == ratios[i - 1] && ratios[i] == ratios[i + 1]) continue;
        const double lo = xs[i - 1];
        const double hi = xs[i + 1];
        const double x = golden_section(f, lo, hi, 1e-13 * std::max(1.0, x_max));
        const Measure mx = measure(prop.psi(t, 0.0, x));
        const double r = mx.ratio();
        if (r >= opts.root_tolerance) continue;
        if (!out.empty() && std::abs(out.back().x - x) <= 2.0 * (hi - lo)) {
            if (r < out.back().ratio) out.back().x = x;
            continue;
        }
        ConjugatePoint p;
        p.x = x;
        p.bracket_lo = lo;
        p.bracket_hi = hi;
        p.ratio = r;
        for (Eigen::Index k = 0; k < mx.sv.size(); ++k)
            if (mx.sv(k) < opts.rank_tolerance * mx.scale) ++p.multiplicity;
        out.push_back(p);
    }
    return out;
}

std::vector<ConjugatePoint> scan_conjugate_points(const ProblemSpec& spec, double x_max, int samples, double t) {
    require_valid(spec);
    if (spec.boundary.preset != BoundaryPreset::Dirichlet)
        throw Error(ErrorKind::Validation, "dirichlet-boundary", "conjugate points require the Dirichlet preset");
    if (!(x_max > 0.0) || x_max > spec.length * (1.0 + 1e-12))
        throw Error(ErrorKind::Validation, "0 < x_max <= length", "scan range outside (0, length]");
    DeterminantMap map(spec);
    MorseOptions opts;
    opts.scan_samples = samples;
    return scan_conjugate_points(map, t, x_max, opts);
}

double select_delta(const DeterminantMap& map, double t, double p_min, double c_sup) {
    const double length = map.propagator().spec().length;
    double delta = std::min(length / 8.0, 0.5 * kPi * std::sqrt(p_min / std::max(c_sup, 1e-12)));
    constexpr int kGrid = 24;
    for (int attempt = 0; attempt < 40; ++attempt) {
        bool ok = true;
        double previous = 0.0;
        for (int i = 0; i < kGrid && ok; ++i) {
            const double x = delta * std::pow(10.0, -3.0 * (1.0 - static_cast<double>(i) / (kGrid - 1)));
            const RVector sv = singular_values(map.G(t, 0.0, x));
            const double smin = sv(sv.size() - 1);
            ok = smin > previous && smin > 1e-7 * sv(0);
            previous = smin;
        }
        if (ok) return delta;
        delta *= 0.5;
    }
    throw Error(ErrorKind::Precondition, "no conjugate point in (0, delta]",
                "could not find a lower cut with monotone growth of sigma_min(G0)");
}

int local_degree(const DeterminantMap& map, double t, double x0, double half_size, const WindingOptions& opts) {
    const Rectangle cell{-half_size, half_size, x0 - half_size, x0 + half_size};
    const LogMap f = [&](double s, double x) { return map.det_G(t, s, x); };
    return winding(f, cell, opts).degree;
}

ConjugateReport morse_via_degree(const ProblemSpec& input, const MorseOptions& opts) {
    const ProblemSpec spec = frozen_at(input, opts.t);
    const ValidationReport report = require_valid(spec);
    if (spec.boundary.preset != BoundaryPreset::Dirichlet)
        throw Error(ErrorKind::Validation, "dirichlet-boundary", "the Morse index theorem needs the Dirichlet preset");
    if (!report.p_positive_definite)
        throw Error(ErrorKind::Precondition, "P positive definite", "P must be positive definite on [0, length]");

    ConjugateReport out;
    out.t = opts.t;
    DeterminantMap map(spec, opts.steps);
    const double length = spec.length;
    out.strip_height = opts.strip_height > 0.0 ? opts.strip_height : default_strip_height(spec);
    out.delta = opts.delta > 0.0 ? opts.delta : select_delta(map, opts.t, report.p_min_eigenvalue, report.c_sup);
    if (!(out.delta < length))
        throw Error(ErrorKind::Validation, "delta < length", "lower cut must lie below the interval length");

    const double end_ratio = measure(map.propagator().psi(opts.t, 0.0, length)).ratio();
    if (end_ratio < opts.root_tolerance) {
        std::ostringstream os;
        os << "G0(length) is singular (sigma ratio " << end_ratio << "): conjugate point at x = length";
        throw BoundaryZero(0.0, length, os.str());
    }

    const Rectangle v{-out.strip_height, out.strip_height, out.delta, length};
    const LogMap f = [&](double s, double x) { return map.det_G(opts.t, s, x); };
    WindingOptions wopts = opts.winding;
    wopts.keep_trace = false;
    out.total_degree = winding(f, v, wopts).degree;

    for (ConjugatePoint& p : scan_conjugate_points(map, opts.t, length, opts))
        if (p.x > out.delta) out.points.push_back(p);

    const std::size_t count = out.points.size();
    parallel_for(count, [&](std::size_t i) {
        double gap = std::min(out.points[i].x - out.delta, length - out.points[i].x);
        if (i > 0) gap = std::min(gap, out.points[i].x - out.points[i - 1].x);
        if (i + 1 < count) gap = std::min(gap, out.points[i + 1].x - out.points[i].x);
        const double half = std::min(0.45 * gap, 0.25);
        WindingOptions local = opts.winding;
        local.keep_trace = false;
        out.points[i].local_degree = local_degree(map, opts.t, out.points[i].x, half, local);
    });
    for (const auto& p : out.points) out.local_sum += p.local_degree;

    if (out.local_sum != out.total_degree) out.zero_cells = localize_zeros(f, v, out.total_degree);
    return out;
}

void write_det_g_csv(std::ostream& os, const DeterminantMap& map, double t, double x_max, int samples) {
    os << "x,det_re,det_im,ratio\n";
    os.precision(17);
    for (int i = 1; i <= samples; ++i) {
        const double x = x_max * i / samples;
        const CMatrix psi = map.propagator().psi(t, 0.0, x);
        const cplx d = log_determinant(block_G(psi)).value();
        os << x << "," << d.real() << "," << d.imag() << "," << measure(psi).ratio() << "\n";
    }
}

}  // namespace nsmorse
