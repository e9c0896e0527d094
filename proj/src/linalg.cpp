#include "nsmorse/linalg.hpp"

#include <algorithm>

namespace nsmorse {

double principal_angle(double angle) {
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

LogDet& LogDet::operator*=(const LogDet& other) {
    if (is_zero() || other.is_zero()) {
        log_abs = -std::numeric_limits<double>::infinity();
        arg = 0.0;
        return *this;
    }
    log_abs += other.log_abs;
    arg = principal_angle(arg + other.arg);
    return *this;
}

LogDet operator*(LogDet a, const LogDet& b) { return a *= b; }

LogDet make_logdet(cplx value) {
    LogDet d;
    if (value == cplx{0.0, 0.0}) return d;
    d.log_abs = std::log(std::abs(value));
    d.arg = std::arg(value);
    return d;
}

LogDet log_determinant(const CMatrix& a) {
    const Eigen::Index n = a.rows();
    CMatrix lu = a;
    LogDet det;
    det.log_abs = 0.0;
    double arg = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p;
        double best = lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
        p += k;
        if (best == 0.0) return LogDet{};
        if (p != k) {
            lu.row(k).swap(lu.row(p));
            arg += kPi;
        }
        const cplx pivot = lu(k, k);
        det.log_abs += std::log(std::abs(pivot));
        arg += std::arg(pivot);
        if (k + 1 < n) {
            lu.col(k).tail(n - k - 1) /= pivot;
            lu.bottomRightCorner(n - k - 1, n - k - 1).noalias() -=
                lu.col(k).tail(n - k - 1) * lu.row(k).tail(n - k - 1);
        }
    }
    det.arg = principal_angle(arg);
    return det;
}

RVector singular_values(const CMatrix& a) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues();
}

double spectral_norm(const RMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMatrix> svd(a);
    return svd.singularValues()(0);
}

std::vector<std::vector<int>> index_subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    if (k > d) return out;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == d - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

CMatrix additive_compound(const CMatrix& a, const std::vector<std::vector<int>>& subsets) {
    const Eigen::Index m = static_cast<Eigen::Index>(subsets.size());
    CMatrix out = CMatrix::Zero(m, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        const auto& J = subsets[static_cast<std::size_t>(c)];
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto& I = subsets[static_cast<std::size_t>(r)];
            if (r == c) {
                cplx sum = 0.0;
                for (int i : I) sum += a(i, i);
                out(r, c) = sum;
                continue;
            }
            // I and J must differ in exactly one position: I = K ∪ {i}, J = K ∪ {j}.
            int only_i = -1;
            int only_j = -1;
            int pos_i = 0;
            int pos_j = 0;
            int diff = 0;
            for (std::size_t p = 0; p < I.size(); ++p) {
                if (!std::binary_search(J.begin(), J.end(), I[p])) {
                    only_i = I[p];
                    pos_i = static_cast<int>(p);
                    ++diff;
                }
                if (!std::binary_search(I.begin(), I.end(), J[p])) {
                    only_j = J[p];
                    pos_j = static_cast<int>(p);
                }
            }
            if (diff != 1) continue;
            out(r, c) = ((pos_i + pos_j) % 2 == 0 ? 1.0 : -1.0) * a(only_i, only_j);
        }
    }
    return out;
}

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), rows_(static_cast<std::size_t>(2 * kl + ku + 1)),
      ab_(rows_ * static_cast<std::size_t>(n), cplx{0.0, 0.0}) {}

LogDet BandMatrix::factor_log_determinant() {
    LogDet det;
    det.log_abs = 0.0;
    double arg = 0.0;
    const int kv = kl_ + ku_;
    int ju = 0;
    auto at = [&](int i, int j) -> cplx& {
        return ab_[static_cast<std::size_t>(j) * rows_ + static_cast<std::size_t>(kv + i - j)];
    };
    for (int j = 0; j < n_; ++j) {
        const int km = std::min(kl_, n_ - 1 - j);
        int jp = j;
        double best = std::abs(at(j, j));
        for (int i = j + 1; i <= j + km; ++i) {
            double v = std::abs(at(i, j));
            if (v > best) {
                best = v;
                jp = i;
            }
        }
        if (best == 0.0) return LogDet{};
        ju = std::max(ju, std::min(jp + ku_, n_ - 1));
        if (jp != j) {
            for (int c = j; c <= ju; ++c) std::swap(at(j, c), at(jp, c));
            arg += kPi;
        }
        const cplx pivot = at(j, j);
        det.log_abs += std::log(std::abs(pivot));
        arg += std::arg(pivot);
        for (int i = j + 1; i <= j + km; ++i) at(i, j) /= pivot;
        for (int c = j + 1; c <= ju; ++c) {
            const cplx u = at(j, c);
            if (u == cplx{0.0, 0.0}) continue;
            for (int i = j + 1; i <= j + km; ++i) at(i, c) -= at(i, j) * u;
        }
    }
    det.arg = principal_angle(arg);
    return det;
}

}  // namespace nsmorse
