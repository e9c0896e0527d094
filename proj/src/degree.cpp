#include "nsmorse/degree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <tuple>

#include "nsmorse/boundary.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/parallel.hpp"

namespace nsmorse {

namespace {

constexpr double kLogFloor = -690.7755278982137;  // log(1e-300)

struct Point {
    double h;
    double v;
};

Point edge_point(const Rectangle& r, int edge, double u) {
    switch (edge) {
    case 0: return {r.t_min + u * r.width(), r.s_min};
    case 1: return {r.t_max, r.s_min + u * r.height()};
    case 2: return {r.t_max - u * r.width(), r.s_max};
    default: return {r.t_min, r.s_max - u * r.height()};
    }
}

struct Segment {
    std::vector<TraceSample> samples;  // interior points added by bisection, in order
    std::vector<double> increments;
    double min_margin = std::numeric_limits<double>::infinity();
};

void check_sample(const TraceSample& s, double threshold) {
    if (s.value.is_zero() || !std::isfinite(s.value.arg) || s.value.log_abs <= threshold) {
        std::ostringstream os;
        os << "|f| = exp(" << s.value.log_abs << ") is below the zero tolerance exp(" << threshold << ")";
        throw BoundaryZero(s.h, s.v, os.str());
    }
}

// A step is accepted when it and both of its halves turn by less than π/2 and
// the halves add up to it; the midpoint test catches steps aliased by 2π.
void refine(const LogMap& f, const TraceSample& a, const TraceSample& b, const TraceSample& m, int depth,
            double threshold, const WindingOptions& opts, Segment& seg) {
    const double d = principal_angle(b.value.arg - a.value.arg);
    const double d1 = principal_angle(m.value.arg - a.value.arg);
    const double d2 = principal_angle(b.value.arg - m.value.arg);
    const double limit = 0.5 * kPi;
    if (std::abs(d) < limit && std::abs(d1) < limit && std::abs(d2) < limit && std::abs(d1 + d2 - d) < 1e-6) {
        seg.increments.push_back(d);
        return;
    }
    if (depth >= opts.max_depth) {
        throw BoundaryZero(m.h, m.v, "argument jump persists after maximal bisection");
    }
    const auto sample = [&](const TraceSample& p, const TraceSample& q) {
        TraceSample s;
        s.h = 0.5 * (p.h + q.h);
        s.v = 0.5 * (p.v + q.v);
        s.value = f(s.h, s.v);
        check_sample(s, threshold);
        seg.min_margin = std::min(seg.min_margin, s.value.log_abs - threshold);
        return s;
    };
    const TraceSample left = sample(a, m);
    const TraceSample right = sample(m, b);
    refine(f, a, m, left, depth + 1, threshold, opts, seg);
    seg.samples.push_back(m);
    refine(f, m, b, right, depth + 1, threshold, opts, seg);
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

}  // namespace

DegreeResult winding(const LogMap& f, const Rectangle& rect, const WindingOptions& opts) {
    if (!rect.valid()) throw Error(ErrorKind::Validation, "valid-rectangle", "winding: empty rectangle");
    const int per_edge = std::max(opts.samples_per_edge, 2);
    const std::size_t count = static_cast<std::size_t>(4 * per_edge);

    std::vector<TraceSample> initial(count);
    parallel_for(count, [&](std::size_t i) {
        const int edge = static_cast<int>(i) / per_edge;
        const double u = static_cast<double>(static_cast<int>(i) % per_edge) / per_edge;
        const Point p = edge_point(rect, edge, u);
        initial[i].h = p.h;
        initial[i].v = p.v;
        initial[i].value = f(p.h, p.v);
    });

    // Zero threshold relative to the neighbouring magnitudes, since |f| can
    // change by hundreds of orders of magnitude around the contour.
    const double log_tol = std::log(opts.zero_tolerance);
    std::vector<double> threshold(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> window;
        for (int k = -2; k <= 2; ++k) {
            const auto& s = initial[(i + count - 2 + static_cast<std::size_t>(k + 2)) % count];
            window.push_back(s.value.is_zero() ? kLogFloor : s.value.log_abs);
        }
        threshold[i] = std::max(median(window) + log_tol, kLogFloor);
    }
    for (std::size_t i = 0; i < count; ++i) check_sample(initial[i], threshold[i]);

    std::vector<Segment> segments(count);
    parallel_for(count, [&](std::size_t i) {
        const std::size_t j = (i + 1) % count;
        const double thr = std::min(threshold[i], threshold[j]);
        segments[i].min_margin = initial[i].value.log_abs - threshold[i];
        TraceSample mid;
        mid.h = 0.5 * (initial[i].h + initial[j].h);
        mid.v = 0.5 * (initial[i].v + initial[j].v);
        mid.value = f(mid.h, mid.v);
        check_sample(mid, thr);
        segments[i].min_margin = std::min(segments[i].min_margin, mid.value.log_abs - thr);
        refine(f, initial[i], initial[j], mid, 0, thr, opts, segments[i]);
    });

    DegreeResult result;
    BoundaryTrace& trace = result.trace;
    trace.min_log_abs = std::numeric_limits<double>::infinity();
    trace.min_margin = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        for (double d : segments[i].increments) total += d;
        trace.min_margin = std::min(trace.min_margin, segments[i].min_margin);
        trace.min_log_abs = std::min(trace.min_log_abs, initial[i].value.log_abs);
        for (const auto& s : segments[i].samples) trace.min_log_abs = std::min(trace.min_log_abs, s.value.log_abs);
        if (opts.keep_trace) {
            trace.samples.push_back(initial[i]);
            trace.samples.insert(trace.samples.end(), segments[i].samples.begin(), segments[i].samples.end());
            trace.increments.insert(trace.increments.end(), segments[i].increments.begin(),
                                    segments[i].increments.end());
        }
    }
    trace.total_winding = total;
    const double turns = total / (2.0 * kPi);
    result.degree = static_cast<int>(std::lround(turns));
    result.residual = std::abs(turns - result.degree);
    if (result.residual >= 0.01) {
        std::ostringstream os;
        os << "winding residual " << result.residual << " exceeds 0.01";
        throw Error(ErrorKind::NonConvergence, "integral-winding", os.str());
    }
    return result;
}

DegreeResult winding(const std::function<cplx(cplx)>& f, const Rectangle& rect, const WindingOptions& opts) {
    return winding([&](double h, double v) { return make_logdet(f(cplx(h, v))); }, rect, opts);
}

namespace {

std::array<Rectangle, 4> split(const Rectangle& r, double fh, double fv) {
    const double hm = r.t_min + fh * r.width();
    const double vm = r.s_min + fv * r.height();
    return {Rectangle{r.t_min, hm, r.s_min, vm}, Rectangle{hm, r.t_max, r.s_min, vm},
            Rectangle{r.t_min, hm, vm, r.s_max}, Rectangle{hm, r.t_max, vm, r.s_max}};
}

}  // namespace

std::vector<ZeroCell> localize_zeros(const LogMap& f, const Rectangle& rect, int degree,
                                     const LocalizeOptions& opts) {
    std::vector<ZeroCell> out;
    if (degree == 0) return out;
    static constexpr std::array<std::pair<double, double>, 4> kSplits = {
        {{0.4812, 0.5241}, {0.5377, 0.4623}, {0.4291, 0.5702}, {0.5853, 0.4158}}};
    WindingOptions wopts;
    wopts.samples_per_edge = opts.samples_per_edge;
    wopts.keep_trace = false;
    const double min_w = opts.min_relative_size * rect.width();
    const double min_h = opts.min_relative_size * rect.height();

    std::vector<ZeroCell> pending{{rect, degree}};
    while (!pending.empty()) {
        ZeroCell cell = pending.back();
        pending.pop_back();
        const bool small = cell.cell.width() <= min_w && cell.cell.height() <= min_h;
        if (small || out.size() + pending.size() + 4 > opts.max_cells) {
            out.push_back(cell);
            continue;
        }
        bool done = false;
        for (auto [fh, fv] : kSplits) {
            // A direction already at the minimum size is left unsplit.
            const double ah = cell.cell.width() <= min_w ? 1.0 : fh;
            const double av = cell.cell.height() <= min_h ? 1.0 : fv;
            auto kids = split(cell.cell, ah, av);
            std::vector<ZeroCell> found;
            int sum = 0;
            try {
                for (const auto& k : kids) {
                    if (!(k.width() > 0.0 && k.height() > 0.0)) continue;
                    const int d = winding(f, k, wopts).degree;
                    sum += d;
                    if (d != 0) found.push_back({k, d});
                }
            } catch (const BoundaryZero&) {
                continue;
            }
            if (sum != cell.degree) continue;
            pending.insert(pending.end(), found.begin(), found.end());
            done = true;
            break;
        }
        if (!done) out.push_back(cell);
    }
    std::sort(out.begin(), out.end(), [](const ZeroCell& a, const ZeroCell& b) {
        return std::tie(a.cell.t_min, a.cell.s_min) < std::tie(b.cell.t_min, b.cell.s_min);
    });
    return out;
}

DegreeResult degree_index(const ProblemSpec& spec, const Rectangle& omega, const DegreeOptions& opts) {
    require_valid(spec);
    DeterminantMap map(spec, opts.steps);
    if (map.dirichlet()) {
        std::vector<cplx> corners = {{omega.t_min, omega.s_min}, {omega.t_max, omega.s_min},
                                     {omega.t_max, omega.s_max}, {omega.t_min, omega.s_max}};
        const double err = dirichlet_consistency(map, corners);
        if (!(err < 1e-6)) {
            std::ostringstream os;
            os << "reduced Dirichlet determinant disagrees with det R_z (relative error " << err << ")";
            throw Error(ErrorKind::Mismatch, "dirichlet-reduction", os.str());
        }
    }
    const LogMap f = [&map](double t, double s) { return map.rho(t, s); };
    DegreeResult result = winding(f, omega, opts.winding);
    if (opts.localize) result.zero_cells = localize_zeros(f, omega, result.degree, opts.localize_options);
    return result;
}

void write_trace_csv(std::ostream& os, const BoundaryTrace& trace) {
    os << "h,v,log_abs,arg\n";
    os.precision(17);
    for (const auto& s : trace.samples) os << s.h << "," << s.v << "," << s.value.log_abs << "," << s.value.arg << "\n";
}

}  // namespace nsmorse
