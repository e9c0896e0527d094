#include "nsmorse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nsmorse/degree.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/parallel.hpp"

namespace nsmorse {

bool modal_eligible(const ProblemSpec& spec) {
    if (spec.boundary.preset != BoundaryPreset::Dirichlet || !spec.constant_coefficients()) return false;
    const RMatrix q = spec.Q(0.0);
    return (q - q.transpose()).cwiseAbs().maxCoeff() == 0.0;
}

int default_grid(const ProblemSpec& spec) { return std::max(8, static_cast<int>(std::ceil(400.0 * spec.length))); }

Discretization discretize(const ProblemSpec& spec, double t, int m, bool force_dense) {
    if (spec.boundary.preset != BoundaryPreset::Dirichlet)
        throw Error(ErrorKind::Validation, "dirichlet-boundary",
                    "the finite-difference oracle supports the Dirichlet preset only");
    if (m < 8) throw Error(ErrorKind::Validation, "m >= 8", "discretize: at least 8 interior nodes required");

    Discretization d;
    d.m = m;
    d.n = spec.n;
    d.t = t;
    d.h = spec.length / (m + 1);
    const double h = d.h;
    const double h2 = h * h;
    d.lower.reserve(m);
    d.diag.reserve(m);
    d.upper.reserve(m);
    for (int j = 1; j <= m; ++j) {
        const double x = j * h;
        const RMatrix pp = spec.P(x + 0.5 * h);
        const RMatrix pm = spec.P(x - 0.5 * h);
        const RMatrix qp = spec.Q(x + 0.5 * h);
        const RMatrix qm = spec.Q(x - 0.5 * h);
        const RMatrix qt = spec.Q(x).transpose();
        d.upper.push_back(-pp / h2 - qp / (2.0 * h) + qt / (2.0 * h));
        d.diag.push_back((pp + pm) / h2 - qp / (2.0 * h) + qm / (2.0 * h) + spec.zeroth_order(x, t));
        d.lower.push_back(-pm / h2 + qm / (2.0 * h) - qt / (2.0 * h));
    }

    d.modal = modal_eligible(spec);
    if (d.modal) {
        const RMatrix p = spec.P(0.0);
        const RMatrix z = spec.zeroth_order(0.0, t);
        d.theta.reserve(m);
        d.blocks.reserve(m);
        for (int k = 1; k <= m; ++k) {
            const double sn = std::sin(k * kPi / (2.0 * (m + 1)));
            const double theta = 4.0 / h2 * sn * sn;
            d.theta.push_back(theta);
            d.blocks.push_back(theta * p + z);
        }
    }
    if (!d.modal || force_dense) d.matrix = d.assembled(0.0).real();
    return d;
}

CMatrix Discretization::assembled(double s) const {
    const Eigen::Index size = static_cast<Eigen::Index>(m) * n;
    CMatrix a = CMatrix::Zero(size, size);
    for (int j = 0; j < m; ++j) {
        const Eigen::Index r = static_cast<Eigen::Index>(j) * n;
        a.block(r, r, n, n) = diag[j].cast<cplx>();
        if (j > 0) a.block(r, r - n, n, n) = lower[j].cast<cplx>();
        if (j + 1 < m) a.block(r, r + n, n, n) = upper[j].cast<cplx>();
    }
    a.diagonal().array() += cplx(0.0, s);
    return a;
}

namespace {

std::vector<cplx> eigenvalues_of(const RMatrix& a) {
    std::vector<cplx> out;
    if (a.rows() == 1) {
        out.emplace_back(a(0, 0), 0.0);
        return out;
    }
    Eigen::EigenSolver<RMatrix> es(a, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::NonConvergence, "eigenvalue-convergence", "dense eigenvalue iteration failed");
    const auto& ev = es.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
    return out;
}

}  // namespace

SpectrumSnapshot spectrum(const Discretization& disc) {
    SpectrumSnapshot snap;
    snap.t = disc.t;
    if (disc.modal) {
        for (std::size_t k = 0; k < disc.blocks.size(); ++k) {
            for (cplx l : eigenvalues_of(disc.blocks[k])) {
                snap.eigenvalues.push_back(l);
                snap.group.push_back(static_cast<int>(k));
            }
        }
        return snap;
    }
    snap.eigenvalues = eigenvalues_of(disc.matrix);
    snap.group.assign(snap.eigenvalues.size(), 0);
    return snap;
}

SpectrumSnapshot spectrum(const ProblemSpec& spec, double t, int m) { return spectrum(discretize(spec, t, m)); }

LogDet shifted_log_det(const Discretization& disc, double s) {
    const int n = disc.n;
    if (disc.modal) {
        LogDet acc;
        acc.log_abs = 0.0;
        for (const auto& b : disc.blocks) {
            CMatrix c = b.cast<cplx>();
            c.diagonal().array() += cplx(0.0, s);
            acc *= log_determinant(c);
        }
        return acc;
    }
    const int size = disc.m * n;
    const int band = 2 * n - 1;
    BandMatrix a(size, band, band);
    for (int j = 0; j < disc.m; ++j) {
        const int r = j * n;
        for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
                a(r + p, r + q) = disc.diag[j](p, q);
                if (j > 0) a(r + p, r - n + q) = disc.lower[j](p, q);
                if (j + 1 < disc.m) a(r + p, r + n + q) = disc.upper[j](p, q);
            }
            a(r + p, r + p) += cplx(0.0, s);
        }
    }
    return a.factor_log_determinant();
}

double gap_tolerance(double h, cplx lambda) { return 10.0 * h * h * std::max(1.0, std::abs(lambda)); }

namespace {

double eigenvalue_floor(const ProblemSpec& spec, const ValidationReport& report) {
    return spec.eigenvalue_floor ? *spec.eigenvalue_floor : report.c_sup + 1.0;
}

MorseResult count_negative(const SpectrumSnapshot& snap, double h) {
    MorseResult r;
    r.min_abs_re = std::numeric_limits<double>::infinity();
    r.min_re = std::numeric_limits<double>::infinity();
    for (cplx l : snap.eigenvalues) {
        r.min_re = std::min(r.min_re, l.real());
        const double margin = std::abs(l.real()) / gap_tolerance(h, l);
        r.min_abs_re = std::min(r.min_abs_re, std::abs(l.real()));
        if (margin < 1.0) {
            std::ostringstream os;
            os << "discrete eigenvalue " << l.real() << (l.imag() < 0 ? "-" : "+") << std::abs(l.imag())
               << "i lies within the gap tolerance of the imaginary axis at t = " << snap.t;
            throw Error(ErrorKind::Degenerate, "ker A_t = {0}", os.str());
        }
        if (l.real() < 0.0) {
            ++r.index;
            r.negative.push_back(l);
            r.max_abs_im_negative = std::max(r.max_abs_im_negative, std::abs(l.imag()));
        }
    }
    std::sort(r.negative.begin(), r.negative.end(),
              [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    return r;
}

}  // namespace

MorseResult morse_index(const ProblemSpec& spec, double t, const OracleOptions& opts) {
    const ValidationReport report = require_valid(spec);
    const int m = opts.m > 0 ? opts.m : default_grid(spec);
    const Discretization disc = discretize(spec, t, m);
    MorseResult r = count_negative(spectrum(disc), disc.h);
    r.m = m;
    const double floor = eigenvalue_floor(spec, report);
    if (r.min_re < -floor) {
        std::ostringstream os;
        os << "eigenvalue with real part " << r.min_re << " below the floor -" << floor;
        throw Error(ErrorKind::Precondition, "eigenvalue-floor", os.str());
    }
    if (opts.richardson) {
        const Discretization fine = discretize(spec, t, 2 * m + 1);
        const MorseResult check = count_negative(spectrum(fine), fine.h);
        if (check.index != r.index) {
            std::ostringstream os;
            os << "Morse index changes from " << r.index << " to " << check.index << " when refining m = " << m;
            throw Error(ErrorKind::NonConvergence, "grid-converged-morse-index", os.str());
        }
    }
    return r;
}

namespace {

struct Tracked {
    int id;
    int group;
    cplx lambda;
};

struct FlowState {
    double t = 0.0;
    std::vector<Tracked> tracked;
    int next_id = 0;
};

struct FlowContext {
    const ProblemSpec* spec;
    int m;
    double window;
    std::vector<char> active;  // modal blocks that can reach the axis
    bool record;
};

SpectrumSnapshot windowed_snapshot(const FlowContext& ctx, double t) {
    const Discretization disc = discretize(*ctx.spec, t, ctx.m);
    if (disc.modal) {
        SpectrumSnapshot snap;
        snap.t = t;
        for (std::size_t k = 0; k < disc.blocks.size(); ++k) {
            if (!ctx.active[k]) continue;
            for (cplx l : eigenvalues_of(disc.blocks[k])) {
                snap.eigenvalues.push_back(l);
                snap.group.push_back(static_cast<int>(k));
            }
        }
        return snap;
    }
    return spectrum(disc);
}

struct Pairing {
    std::vector<Tracked> next;
    std::vector<Crossing> crossings;
    bool ambiguous = false;
};

Pairing match(const FlowContext& ctx, const FlowState& from, const SpectrumSnapshot& to, int& next_id) {
    Pairing out;
    const double w = ctx.window;
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < to.eigenvalues.size(); ++j)
        if (to.eigenvalues[j].real() < 2.0 * w) candidates.push_back(j);

    struct Pair {
        double dist;
        std::size_t a;
        std::size_t b;
    };
    std::vector<Pair> pairs;
    for (std::size_t a = 0; a < from.tracked.size(); ++a)
        for (std::size_t b : candidates)
            if (to.group[b] == from.tracked[a].group)
                pairs.push_back({std::abs(to.eigenvalues[b] - from.tracked[a].lambda), a, b});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.dist < y.dist; });

    std::vector<char> used_a(from.tracked.size(), 0), used_b(to.eigenvalues.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    for (const Pair& p : pairs) {
        if (used_a[p.a] || used_b[p.b]) continue;
        used_a[p.a] = used_b[p.b] = 1;
        matched.emplace_back(p.a, p.b);
    }
    if (matched.size() != from.tracked.size()) {
        out.ambiguous = true;
        return out;
    }

    for (auto [ia, ib] : matched) {
        const Tracked& a = from.tracked[ia];
        const cplx b = to.eigenvalues[ib];
        const double d = std::abs(b - a.lambda);
        double gap = std::numeric_limits<double>::infinity();
        const double cluster = 1e-6 * std::max(1.0, std::abs(a.lambda));
        for (const Tracked& o : from.tracked) {
            if (o.id == a.id || o.group != a.group) continue;
            const double g = std::abs(o.lambda - a.lambda);
            if (g > cluster) gap = std::min(gap, g);
        }
        const bool near_axis = a.lambda.real() * b.real() <= 0.0 || std::abs(a.lambda.real()) < 2.0 * d ||
                               std::abs(b.real()) < 2.0 * d;
        if (d > 0.5 * gap && near_axis) {
            out.ambiguous = true;
            return out;
        }
        const bool was_left = a.lambda.real() < 0.0;
        const bool is_left = b.real() < 0.0;
        if (was_left != is_left) {
            const double ra = a.lambda.real();
            const double rb = b.real();
            const double frac = ra == rb ? 0.5 : ra / (ra - rb);
            Crossing c;
            c.t = from.t + frac * (to.t - from.t);
            c.eigenvalue = a.lambda + frac * (b - a.lambda);
            c.direction = was_left ? +1 : -1;
            out.crossings.push_back(c);
        }
        if (b.real() < w) out.next.push_back({a.id, a.group, b});
    }
    for (std::size_t j : candidates) {
        if (used_b[j] || to.eigenvalues[j].real() >= w) continue;
        if (to.eigenvalues[j].real() < 0.0) {
            out.ambiguous = true;
            return out;
        }
        out.next.push_back({next_id++, to.group[j], to.eigenvalues[j]});
    }
    return out;
}

void advance(const FlowContext& ctx, FlowState& state, const SpectrumSnapshot& to, int depth, int max_depth,
             CrossingLedger& ledger) {
    int next_id = state.next_id;
    Pairing p = match(ctx, state, to, next_id);
    if (p.ambiguous) {
        if (depth >= max_depth) {
            std::ostringstream os;
            os << "eigenvalue matching remains ambiguous on [" << state.t << ", " << to.t << "]";
            throw Error(ErrorKind::MatchingAmbiguity, "unambiguous-continuation", os.str());
        }
        const SpectrumSnapshot mid = windowed_snapshot(ctx, 0.5 * (state.t + to.t));
        advance(ctx, state, mid, depth + 1, max_depth, ledger);
        advance(ctx, state, to, depth + 1, max_depth, ledger);
        return;
    }
    state.next_id = next_id;
    state.t = to.t;
    state.tracked = std::move(p.next);
    ++ledger.snapshots;
    for (const Crossing& c : p.crossings) {
        auto same = std::find_if(ledger.crossings.begin(), ledger.crossings.end(), [&](const Crossing& o) {
            return o.direction == c.direction && std::abs(o.t - c.t) <= 1e-9 * std::max(1.0, std::abs(c.t)) &&
                   std::abs(o.eigenvalue - c.eigenvalue) <= 1e-6 * std::max(1.0, std::abs(c.eigenvalue));
        });
        if (same != ledger.crossings.end())
            ++same->multiplicity;
        else
            ledger.crossings.push_back(c);
        ledger.net += c.direction;
    }
    if (ctx.record)
        for (const Tracked& tr : state.tracked) ledger.trajectories.push_back({state.t, tr.id, tr.lambda});
}

}  // namespace

CrossingLedger spectral_flow(const ProblemSpec& spec, const Rectangle& omega, const OracleOptions& opts) {
    const ValidationReport report = require_valid(spec);
    if (!omega.valid()) throw Error(ErrorKind::Validation, "valid-rectangle", "spectral_flow: empty rectangle");
    FlowContext ctx;
    ctx.spec = &spec;
    ctx.m = opts.m > 0 ? opts.m : default_grid(spec);
    ctx.window = 2.0 * report.c_sup + 10.0;
    ctx.record = opts.record_trajectories;
    const double h = spec.length / (ctx.m + 1);
    if (modal_eligible(spec)) {
        ctx.active.assign(static_cast<std::size_t>(ctx.m), 1);
        if (report.p_positive_definite) {
            for (int k = 1; k <= ctx.m; ++k) {
                const double sn = std::sin(k * kPi / (2.0 * (ctx.m + 1)));
                const double theta = 4.0 / (h * h) * sn * sn;
                if (theta * report.p_min_eigenvalue - report.c_sup > ctx.window) ctx.active[k - 1] = 0;
            }
        }
    }

    CrossingLedger ledger;
    ledger.m = ctx.m;
    const int steps = std::max(opts.path_steps, 1);
    std::vector<SpectrumSnapshot> snaps(static_cast<std::size_t>(steps) + 1);
    parallel_for(snaps.size(), [&](std::size_t i) {
        const double t = omega.t_min + omega.width() * static_cast<double>(i) / steps;
        snaps[i] = windowed_snapshot(ctx, i == static_cast<std::size_t>(steps) ? omega.t_max : t);
    });

    for (std::size_t e : {std::size_t{0}, snaps.size() - 1}) {
        try {
            const MorseResult r = count_negative(snaps[e], h);
            (e == 0 ? ledger.morse_start : ledger.morse_end) = r.index;
        } catch (const Error& err) {
            throw Error(ErrorKind::EndpointDegenerate, "hyperbolic-endpoint", err.what());
        }
    }

    FlowState state;
    state.t = snaps.front().t;
    for (std::size_t j = 0; j < snaps.front().eigenvalues.size(); ++j)
        if (snaps.front().eigenvalues[j].real() < ctx.window)
            state.tracked.push_back({state.next_id++, snaps.front().group[j], snaps.front().eigenvalues[j]});
    if (ctx.record)
        for (const Tracked& tr : state.tracked) ledger.trajectories.push_back({state.t, tr.id, tr.lambda});
    ledger.snapshots = 1;
    for (std::size_t i = 1; i < snaps.size(); ++i) advance(ctx, state, snaps[i], 0, opts.max_refine, ledger);

    if (ledger.net != ledger.morse_start - ledger.morse_end) {
        std::ostringstream os;
        os << "tracked crossings " << ledger.net << " differ from the Morse index change " << ledger.morse_start
           << " - " << ledger.morse_end;
        throw Error(ErrorKind::Mismatch, "consistent-eigenvalue-tracking", os.str());
    }

    if (opts.cross_check) {
        const LogMap f = [&](double t, double s) { return shifted_log_det(discretize(spec, t, ctx.m), s); };
        WindingOptions wopts;
        wopts.keep_trace = false;
        ledger.det_winding = winding(f, omega, wopts).degree;
        ledger.cross_checked = true;
        if (ledger.det_winding != ledger.net) {
            std::ostringstream os;
            os << "crossing count " << ledger.net << " differs from the winding " << ledger.det_winding
               << " of det(A_t + is)";
            throw Error(ErrorKind::Mismatch, "crossings-equal-det-winding", os.str());
        }
    }
    return ledger;
}

SfMorseReport verify_sf_morse(const ProblemSpec& spec, const Rectangle& omega, const OracleOptions& opts) {
    const CrossingLedger ledger = spectral_flow(spec, omega, opts);
    SfMorseReport r;
    r.sf = ledger.net;
    r.det_winding = ledger.det_winding;
    r.morse_start = morse_index(spec, omega.t_min, opts).index;
    r.morse_end = morse_index(spec, omega.t_max, opts).index;
    r.pass = r.sf == r.morse_start - r.morse_end && (!ledger.cross_checked || r.det_winding == r.sf);
    if (!r.pass) {
        std::ostringstream os;
        os << "sf = " << r.sf << " but m-(start) - m-(end) = " << r.morse_start << " - " << r.morse_end;
        throw Error(ErrorKind::Mismatch, "sf-equals-morse-difference", os.str());
    }
    return r;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points) {
    os << "t,k,re,im\n";
    os.precision(17);
    for (const auto& p : points) os << p.t << "," << p.id << "," << p.lambda.real() << "," << p.lambda.imag() << "\n";
}

}  // namespace nsmorse
