#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "nsmorse/types.hpp"

namespace nsmorse {

/// A complex number held as log-modulus and argument, so determinants of
/// fundamental solutions can be compared without overflow.
struct LogDet {
    double log_abs = -std::numeric_limits<double>::infinity();
    double arg = 0.0;  // principal value in (-π, π]

    bool is_zero() const { return std::isinf(log_abs) && log_abs < 0; }
    cplx value() const { return is_zero() ? cplx{0.0, 0.0} : std::polar(std::exp(log_abs), arg); }

    LogDet& operator*=(const LogDet& other);
};

LogDet operator*(LogDet a, const LogDet& b);
LogDet make_logdet(cplx value);

/// Wraps an angle into (-π, π].
double principal_angle(double angle);

/// det via LU with partial pivoting; the permutation parity is tracked
/// explicitly so the sign is deterministic.
LogDet log_determinant(const CMatrix& a);

/// Singular values in decreasing order.
RVector singular_values(const CMatrix& a);

double spectral_norm(const RMatrix& a);

/// k-subsets of {0, ..., d-1} in lexicographic order.
std::vector<std::vector<int>> index_subsets(int d, int k);

/// Additive compound of a on the given k-subset basis: the generator of
/// Λᵏ exp(xa), so that y' = a^{[k]} y carries the k×k minors of a solution.
CMatrix additive_compound(const CMatrix& a, const std::vector<std::vector<int>>& subsets);

/// Complex band matrix in LAPACK gbtrf layout: kl sub-diagonals, ku
/// super-diagonals, plus kl rows of fill-in space for pivoting.
class BandMatrix {
public:
    BandMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return i - j <= kl_ && j - i <= ku_; }
    cplx& operator()(int i, int j) { return ab_[index(i, j)]; }
    cplx operator()(int i, int j) const { return ab_[index(i, j)]; }

    /// In-place LU with partial pivoting; returns the determinant.
    LogDet factor_log_determinant();

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * rows_ + static_cast<std::size_t>(kl_ + ku_ + i - j);
    }

    int n_;
    int kl_;
    int ku_;
    std::size_t rows_;
    std::vector<cplx> ab_;
};

}  // namespace nsmorse
