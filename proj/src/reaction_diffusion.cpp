#include "nsmorse/reaction_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsmorse/degree.hpp"
#include "nsmorse/errors.hpp"
#include "nsmorse/fundamental.hpp"
#include "nsmorse/morse_theorem.hpp"
#include "nsmorse/oracle.hpp"

namespace nsmorse {

TuringReport turing_check(const PlanarConstantProblem& pr) {
    TuringReport r;
    r.tr_V = pr.tr_V();
    r.det_V = pr.det_V();
    r.mass = pr.mass();
    r.delta1 = pr.delta1();
    r.trace_negative = r.tr_V < 0.0;
    r.det_positive = r.det_V > 0.0;
    r.diffusive = r.det_V >= 0.0 && r.mass > 2.0 * std::sqrt(pr.d() * r.det_V);
    r.delta1_positive = r.delta1 > 0.0;
    r.mass_positive = r.mass > 0.0;
    if (pr.d() == 1.0 && r.stable_without_diffusion())
        r.note = "d = 1 gives M = tr V < 0, so the diffusive condition cannot hold";
    return r;
}

namespace {

void require_turing(const PlanarConstantProblem& pr) {
    const TuringReport t = turing_check(pr);
    if (!t.holds()) {
        std::ostringstream os;
        os << "Turing conditions fail: tr V = " << t.tr_V << ", det V = " << t.det_V << ", M = " << t.mass;
        throw Error(ErrorKind::TuringViolated, "Turing conditions", os.str());
    }
}

struct Thresholds {
    double lower;
    double upper;
};

Thresholds thresholds(const PlanarConstantProblem& pr) {
    const double r = std::sqrt(pr.delta1());
    const double scale = pr.a() * pr.a() / (2.0 * pr.d());
    return {(pr.mass() - r) * scale, (pr.mass() + r) * scale};
}

void guard(double threshold, const char* which) {
    const double k = std::round(std::sqrt(std::max(threshold, 0.0)) / kPi);
    for (double kk : {k - 1.0, k, k + 1.0}) {
        if (kk < 1.0) continue;
        const double target = kk * kk * kPi * kPi;
        if (std::abs(threshold - target) <= 1e-9 * std::max(1.0, target)) {
            std::ostringstream os;
            os << which << " threshold " << threshold << " coincides with k^2 pi^2 for k = " << kk;
            throw Error(ErrorKind::DegenerateThreshold, "nondegenerate -L", os.str());
        }
    }
}

int count_below(double threshold) {
    int k = 0;
    while ((k + 1.0) * (k + 1.0) * kPi * kPi < threshold) ++k;
    return k;
}

}  // namespace

EigenCountReport count_negative_eigenvalues(const PlanarConstantProblem& pr) {
    require_turing(pr);
    const Thresholds th = thresholds(pr);
    guard(th.lower, "lower");
    guard(th.upper, "upper");
    EigenCountReport r;
    r.a = pr.a();
    r.lower = th.lower;
    r.upper = th.upper;
    const double d = pr.d();
    for (int k = count_below(th.lower) + 1; k <= count_below(th.upper); ++k) {
        RosterEntry e;
        e.k = k;
        e.mu = -(k * kPi) * (k * kPi) / (pr.a() * pr.a());
        const double b = (d + 1.0) * e.mu + pr.tr_V();
        const double c = d * e.mu * e.mu + pr.mass() * e.mu + pr.det_V();
        const double disc = b * b - 4.0 * c;
        const double q = -0.5 * (b + std::copysign(std::sqrt(std::max(disc, 0.0)), b));
        const double r1 = q;
        const double r2 = c / q;
        e.lambda = std::min(r1, r2);
        const double l = e.lambda;
        e.residual = std::abs(l * l + b * l + c) / std::max({l * l, std::abs(b * l), std::abs(c), 1e-300});
        if (!(e.residual < 1e-10)) {
            std::ostringstream os;
            os << "roster root for k = " << k << " has relative residual " << e.residual;
            throw Error(ErrorKind::NonConvergence, "roster residual < 1e-10", os.str());
        }
        r.roster.push_back(e);
    }
    r.count = static_cast<int>(r.roster.size());
    return r;
}

ConjugateSets conjugate_sets(const PlanarConstantProblem& pr) {
    require_turing(pr);
    const Thresholds th = thresholds(pr);
    guard(th.lower, "lower");
    guard(th.upper, "upper");
    const auto [lp, lm] = lambda_pm(pr, 0.0);
    const double wp = std::sqrt(-lp.real());
    const double wm = std::sqrt(-lm.real());
    ConjugateSets out;
    const int n1 = count_below(th.upper);
    const int n2 = count_below(th.lower);
    for (int k = 1; k <= n1; ++k) out.C1.push_back(k * kPi / wm);
    for (int k = 1; k <= n2; ++k) out.C2.push_back(k * kPi / wp);
    const double ratio = lm.real() / lp.real();
    for (int k1 = 1; k1 <= n1; ++k1) {
        for (int k2 = 1; k2 <= n2; ++k2) {
            const double q = static_cast<double>(k1 * k1) / static_cast<double>(k2 * k2);
            if (std::abs(ratio - q) <= 1e-12 * ratio) {
                out.C3.push_back(k1 * kPi / wm);
                out.C3_indices.emplace_back(k1, k2);
            }
        }
    }
    out.count_with_multiplicity = static_cast<int>(out.C1.size() + out.C2.size());
    out.count_without_multiplicity = out.count_with_multiplicity - static_cast<int>(out.C3.size());
    return out;
}

IdentityReport degree_equals_negative_count(const PlanarConstantProblem& pr, int oracle_m, bool strict) {
    IdentityReport r;
    const ConjugateSets sets = conjugate_sets(pr);
    r.c1_minus_c2 = static_cast<int>(sets.C1.size()) - static_cast<int>(sets.C2.size());
    r.negative_count = count_negative_eigenvalues(pr).count;
    const ProblemSpec spec = pr.to_spec();
    r.degree = morse_via_degree(spec).total_degree;
    OracleOptions opts;
    opts.m = oracle_m;
    const MorseResult oracle = morse_index(spec, 0.0, opts);
    r.oracle = oracle.index;
    r.oracle_max_abs_im = oracle.max_abs_im_negative;
    r.pass = r.c1_minus_c2 == r.negative_count && r.negative_count == r.degree && r.degree == r.oracle;
    if (strict && !r.pass) {
        std::ostringstream os;
        os << "|C1| - |C2| = " << r.c1_minus_c2 << ", #neg = " << r.negative_count << ", degree = " << r.degree
           << ", oracle = " << r.oracle;
        throw Error(ErrorKind::Mismatch, "index equals negative count", os.str());
    }
    return r;
}

int local_degree_table(const PlanarConstantProblem& pr, double x0) {
    require_turing(pr);
    const auto [lp, lm] = lambda_pm(pr, 0.0);
    const auto member = [&](cplx lambda) {
        const double u = std::sqrt(-lambda.real() * x0 * x0 / (kPi * kPi));
        const double k = std::round(u);
        return k >= 1.0 && std::abs(u - k) <= 1e-9;
    };
    const bool in1 = member(lm);
    const bool in2 = member(lp);
    if (!in1 && !in2) {
        std::ostringstream os;
        os << "x0 = " << x0 << " is not a conjugate point";
        throw Error(ErrorKind::NotConjugatePoint, "x0 in C1 or C2", os.str());
    }
    return static_cast<int>(in1) - static_cast<int>(in2);
}

int numerical_local_degree(const PlanarConstantProblem& pr, double x0, double half_size) {
    if (!(half_size > 0.0)) {
        double gap = x0;
        const ConjugateSets sets = conjugate_sets(pr);
        for (const auto* set : {&sets.C1, &sets.C2})
            for (double x : *set)
                if (std::abs(x - x0) > 1e-9 * std::max(1.0, x0)) gap = std::min(gap, std::abs(x - x0));
        half_size = std::min(0.45 * gap, 0.25);
    }
    const Rectangle cell{-half_size, half_size, x0 - half_size, x0 + half_size};
    const LogMap f = [&](double s, double x) { return make_logdet(det_G_analytic(pr, s, x)); };
    WindingOptions opts;
    opts.keep_trace = false;
    return winding(f, cell, opts).degree;
}

}  // namespace nsmorse
