#include "nsmorse/fundamental.hpp"

#include <cmath>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "nsmorse/errors.hpp"

namespace nsmorse {

RMatrix symplectic_j(int n) {
    RMatrix j = RMatrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -RMatrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = RMatrix::Identity(n, n);
    return j;
}

namespace {

// Real part of B at c(t) = 0 (S + C0 only).
RMatrix base_b(const ProblemSpec& spec, double x) {
    const int n = spec.n;
    const RMatrix pinv = spec.P(x).inverse();
    const RMatrix q = spec.Q(x);
    RMatrix b(2 * n, 2 * n);
    b.topLeftCorner(n, n) = pinv;
    b.topRightCorner(n, n) = -pinv * q;
    b.bottomLeftCorner(n, n) = -q.transpose() * pinv;
    b.bottomRightCorner(n, n) = q.transpose() * pinv * q - spec.S(x) - spec.C0(x);
    return b;
}

RMatrix path_direction(const ProblemSpec& spec, double x) {
    RMatrix d = spec.direction_at(x);
    d.diagonal().array() += spec.path.shift;
    return d;
}

}  // namespace

CMatrix system_b(const ProblemSpec& spec, double t, double s, double x) {
    const int n = spec.n;
    CMatrix b = base_b(spec, x).cast<cplx>();
    const double c = spec.path.c(t);
    b.bottomRightCorner(n, n) -= (c * path_direction(spec, x)).cast<cplx>();
    b.bottomRightCorner(n, n).diagonal().array() -= cplx(0.0, s);
    return b;
}

CMatrix system_matrix(const ProblemSpec& spec, double t, double s, double x) {
    return symplectic_j(spec.n).cast<cplx>() * system_b(spec, t, s, x);
}

CMatrix block_E(const CMatrix& psi) { return psi.topLeftCorner(psi.rows() / 2, psi.cols() / 2); }
CMatrix block_F(const CMatrix& psi) { return psi.topRightCorner(psi.rows() / 2, psi.cols() / 2); }
CMatrix block_G(const CMatrix& psi) { return psi.bottomLeftCorner(psi.rows() / 2, psi.cols() / 2); }
CMatrix block_H(const CMatrix& psi) { return psi.bottomRightCorner(psi.rows() / 2, psi.cols() / 2); }

namespace {

void rk4_step(CMatrix& y, const CMatrix& a0, const CMatrix& am, const CMatrix& a1, double h) {
    const CMatrix k1 = a0 * y;
    const CMatrix k2 = am * (y + (0.5 * h) * k1);
    const CMatrix k3 = am * (y + (0.5 * h) * k2);
    const CMatrix k4 = a1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

FundamentalSolution propagate(const ProblemSpec& spec, cplx z, double x_end, int steps) {
    if (!(x_end > 0.0) || x_end > spec.length * (1.0 + 1e-12))
        throw Error(ErrorKind::Validation, "0 < x_end <= length", "propagate: x_end outside (0, length]");
    if (steps < 1) throw Error(ErrorKind::Validation, "steps >= 1", "propagate: steps must be positive");

    const double t = z.real();
    const double s = z.imag();
    const double h = x_end / steps;
    FundamentalSolution sol;
    sol.z = z;
    sol.n = spec.n;
    sol.x.reserve(steps + 1);
    sol.psi.reserve(steps + 1);
    CMatrix y = CMatrix::Identity(2 * spec.n, 2 * spec.n);
    sol.x.push_back(0.0);
    sol.psi.push_back(y);
    CMatrix a0 = system_matrix(spec, t, s, 0.0);
    for (int k = 0; k < steps; ++k) {
        const double x0 = k * h;
        const CMatrix am = system_matrix(spec, t, s, x0 + 0.5 * h);
        const CMatrix a1 = system_matrix(spec, t, s, x0 + h);
        rk4_step(y, a0, am, a1, h);
        if (!y.allFinite()) throw PropagationBlowup(x0 + h);
        sol.x.push_back(x0 + h);
        sol.psi.push_back(y);
        a0 = a1;
    }
    return sol;
}

FundamentalSolution matexp_constant(const RMatrix& P, const RMatrix& L, double s, double x) {
    const Eigen::Index n = P.rows();
    const RMatrix pinv = P.inverse();
    CMatrix jb = CMatrix::Zero(2 * n, 2 * n);
    CMatrix w = L.cast<cplx>();
    w.diagonal().array() += cplx(0.0, s);
    jb.topRightCorner(n, n) = w;
    jb.bottomLeftCorner(n, n) = pinv.cast<cplx>();
    FundamentalSolution sol;
    sol.z = cplx(0.0, s);
    sol.n = static_cast<int>(n);
    sol.x = {0.0, x};
    sol.psi = {CMatrix::Identity(2 * n, 2 * n), CMatrix((x * jb).exp())};
    if (!sol.psi.back().allFinite()) throw PropagationBlowup(x);
    return sol;
}

cplx phi_entire(cplx lambda, double x) {
    const cplx w = lambda * (x * x);
    if (std::abs(w) <= 0.25) {
        cplx term = x;
        cplx sum = term;
        for (int k = 1; k < 30; ++k) {
            term *= w / static_cast<double>((2 * k) * (2 * k + 1));
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    const cplx r = std::sqrt(lambda);
    return std::sinh(r * x) / r;
}

void write_psi_csv(std::ostream& os, const FundamentalSolution& sol) {
    const Eigen::Index dim = 2 * sol.n;
    os << "x";
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) os << ",re_" << i << "_" << j << ",im_" << i << "_" << j;
    os << "\n";
    os.precision(17);
    for (std::size_t k = 0; k < sol.x.size(); ++k) {
        os << sol.x[k];
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) os << "," << sol.psi[k](i, j).real() << "," << sol.psi[k](i, j).imag();
        os << "\n";
    }
}

Propagator::Propagator(const ProblemSpec& spec, int steps) : spec_(spec), n_(spec.n) {
    steps_ = steps > 0 ? steps : spec.steps();
    h_ = spec.length / steps_;
    const RMatrix j = symplectic_j(n_);
    subsets_ = index_subsets(2 * n_, n_);
    constant_ = spec.constant_coefficients();
    if (constant_) {
        const_base_ = j * base_b(spec, 0.0);
        const_dir_ = path_direction(spec, 0.0);
        return;
    }
    base_.reserve(2 * steps_ + 1);
    dir_.reserve(2 * steps_ + 1);
    for (int k = 0; k <= 2 * steps_; ++k) {
        const double x = 0.5 * h_ * k;
        base_.push_back(j * base_b(spec, x));
        dir_.push_back(path_direction(spec, x));
    }
}

CMatrix Propagator::generator(std::size_t half_index, double t, double s) const {
    CMatrix a = base_[half_index].cast<cplx>();
    a.topRightCorner(n_, n_) += (spec_.path.c(t) * dir_[half_index]).cast<cplx>();
    a.topRightCorner(n_, n_).diagonal().array() += cplx(0.0, s);
    return a;
}

CMatrix Propagator::generator_at(double x, double t, double s) const {
    return system_matrix(spec_, t, s, x);
}

CMatrix Propagator::psi(double t, double s, double x) const {
    const Eigen::Index dim = 2 * n_;
    if (constant_) {
        CMatrix a = const_base_.cast<cplx>();
        a.topRightCorner(n_, n_) += (spec_.path.c(t) * const_dir_).cast<cplx>();
        a.topRightCorner(n_, n_).diagonal().array() += cplx(0.0, s);
        CMatrix out = (x * a).exp();
        if (!out.allFinite()) throw PropagationBlowup(x);
        return out;
    }
    CMatrix y = CMatrix::Identity(dim, dim);
    const int full = std::min(steps_, static_cast<int>(std::floor(x / h_ + 1e-9)));
    for (int k = 0; k < full; ++k) {
        rk4_step(y, generator(2 * k, t, s), generator(2 * k + 1, t, s), generator(2 * k + 2, t, s), h_);
        if (!y.allFinite()) throw PropagationBlowup((k + 1) * h_);
    }
    const double x0 = full * h_;
    const double rest = x - x0;
    if (rest > 1e-12 * h_) {
        rk4_step(y, generator(2 * full, t, s), generator_at(x0 + 0.5 * rest, t, s), generator_at(x, t, s), rest);
        if (!y.allFinite()) throw PropagationBlowup(x);
    }
    return y;
}

cplx Propagator::det_G(double t, double s, double x) const {
    // Rows of G are the last n indices: the final subset in lexicographic
    // order. The initial vector e₁∧…∧eₙ is the first.
    const Eigen::Index last = static_cast<Eigen::Index>(subsets_.size()) - 1;
    if (constant_) {
        CMatrix a = const_base_.cast<cplx>();
        a.topRightCorner(n_, n_) += (spec_.path.c(t) * const_dir_).cast<cplx>();
        a.topRightCorner(n_, n_).diagonal().array() += cplx(0.0, s);
        const CMatrix e = (x * compound(a)).exp();
        if (!e.allFinite()) throw PropagationBlowup(x);
        return e(last, 0);
    }
    CMatrix y = CMatrix::Zero(last + 1, 1);
    y(0, 0) = 1.0;
    const int full = std::min(steps_, static_cast<int>(std::floor(x / h_ + 1e-9)));
    CMatrix a0 = compound(generator(0, t, s));
    for (int k = 0; k < full; ++k) {
        const CMatrix a1 = compound(generator(2 * k + 2, t, s));
        rk4_step(y, a0, compound(generator(2 * k + 1, t, s)), a1, h_);
        if (!y.allFinite()) throw PropagationBlowup((k + 1) * h_);
        a0 = a1;
    }
    const double x0 = full * h_;
    const double rest = x - x0;
    if (rest > 1e-12 * h_) {
        rk4_step(y, a0, compound(generator_at(x0 + 0.5 * rest, t, s)), compound(generator_at(x, t, s)), rest);
        if (!y.allFinite()) throw PropagationBlowup(x);
    }
    return y(last, 0);
}

std::vector<CMatrix> Propagator::trajectory(double t, double s) const {
    std::vector<CMatrix> out;
    out.reserve(steps_ + 1);
    const Eigen::Index dim = 2 * n_;
    CMatrix y = CMatrix::Identity(dim, dim);
    out.push_back(y);
    if (constant_) {
        CMatrix a = const_base_.cast<cplx>();
        a.topRightCorner(n_, n_) += (spec_.path.c(t) * const_dir_).cast<cplx>();
        a.topRightCorner(n_, n_).diagonal().array() += cplx(0.0, s);
        const CMatrix step = (h_ * a).exp();
        for (int k = 0; k < steps_; ++k) {
            y = step * y;
            out.push_back(y);
        }
        if (!y.allFinite()) throw PropagationBlowup(spec_.length);
        return out;
    }
    for (int k = 0; k < steps_; ++k) {
        rk4_step(y, generator(2 * k, t, s), generator(2 * k + 1, t, s), generator(2 * k + 2, t, s), h_);
        if (!y.allFinite()) throw PropagationBlowup((k + 1) * h_);
        out.push_back(y);
    }
    return out;
}

}  // namespace nsmorse
