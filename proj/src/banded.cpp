#include "hrnls/banded.hpp"

#include "hrnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hrnls {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), data_(n * (2 * lower + upper + 1), 0.0) {}

void BandMatrix::set_zero() noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        double* r = row(i);
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        std::fill(r + lo, r + hi + 1, 0.0);
    }
}

void BandMatrix::scale_add_identity(double s) noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        double* r = row(i);
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        for (std::size_t j = lo; j <= hi; ++j) r[j] *= s;
        r[i] += 1.0;
    }
}

void BandMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t lo = i > kl_ ? i - kl_ : 0;
        const std::size_t hi = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
}

void BandLU::factor(const BandMatrix& a) {
    lu_ = a;
    if (!eliminate(false)) {
        lu_ = a;
        for (std::size_t i = 0; i < lu_.n_; ++i) {
            double* r = lu_.row(i);
            const std::size_t lo = std::min(lu_.n_, i + lu_.ku_ + 1);
            const std::size_t hi = std::min(lu_.n_, i + lu_.ku_ + lu_.kl_ + 1);
            std::fill(r + lo, r + hi, 0.0);
        }
        if (!eliminate(true)) {
            throw SingularJacobian("band LU: matrix is singular");
        }
    }
}

bool BandLU::eliminate(bool pivot) {
    const std::size_t n = lu_.n_;
    const std::size_t kl = lu_.kl_;
    pivoted_ = pivot;
    fill_ = pivot ? lu_.ku_ + kl : lu_.ku_;
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    inverse_diagonal_.resize(n);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t last_row = std::min(n - 1, k + kl);
        const std::size_t last_col = std::min(n - 1, k + fill_);

        if (pivot) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t r = k + 1; r <= last_row; ++r) {
                if (std::abs(lu_(r, k)) > best) {
                    best = std::abs(lu_(r, k));
                    p = r;
                }
            }
            if (best == 0.0) return false;
            if (p != k) {
                for (std::size_t j = k; j <= last_col; ++j) std::swap(lu_(k, j), lu_(p, j));
                perm_[k] = p;
            }
        }

        const double* pivot_row = lu_.row(k);
        const double pivot_value = pivot_row[k];
        inverse_diagonal_[k] = 1.0 / pivot_value;
        if (!pivot) {
            double row_max = 0.0;
            for (std::size_t j = k; j <= last_col; ++j) row_max = std::max(row_max, std::abs(pivot_row[j]));
            if (!(std::abs(pivot_value) >= 1e-12 * row_max) || pivot_value == 0.0) return false;
        }

        for (std::size_t r = k + 1; r <= last_row; ++r) {
            double* target = lu_.row(r);
            const double factor = target[k] * inverse_diagonal_[k];
            target[k] = factor;
            if (factor == 0.0) continue;
            for (std::size_t j = k + 1; j <= last_col; ++j) target[j] -= factor * pivot_row[j];
        }
    }
    return true;
}

void BandLU::solve(std::span<double> b) const {
    const std::size_t n = lu_.n_;
    const std::size_t kl = lu_.kl_;
    for (std::size_t k = 0; k < n; ++k) {
        if (pivoted_ && perm_[k] != k) std::swap(b[k], b[perm_[k]]);
        const std::size_t last_row = std::min(n - 1, k + kl);
        const double bk = b[k];
        for (std::size_t r = k + 1; r <= last_row; ++r) b[r] -= lu_.row(r)[k] * bk;
    }
    for (std::size_t k = n; k-- > 0;) {
        const double* rk = lu_.row(k);
        const std::size_t last_col = std::min(n - 1, k + fill_);
        double s = b[k];
        for (std::size_t j = k + 1; j <= last_col; ++j) s -= rk[j] * b[j];
        b[k] = s * inverse_diagonal_[k];
    }
}

} // namespace hrnls
