#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrnls {

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Storage reserves `lower` extra super-diagonals so the same object can hold
/// the fill-in of a partially pivoted LU factorisation.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return kl_; }
    std::size_t upper() const noexcept { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + kl_ >= i && j <= i + ku_;
    }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[index(i, j)]; }

    /// Zeroes the band; the pivoting fill region is managed by BandLU.
    void set_zero() noexcept;

    /// A <- s A + I
    void scale_add_identity(double s) noexcept;

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    friend class BandLU;

    std::size_t width() const noexcept { return 2 * kl_ + ku_ + 1; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * width() + (j + kl_ - i);
    }
    /// row(i)[j] is entry (i, j) for j in the stored band of row i.
    double* row(std::size_t i) noexcept { return data_.data() + i * width() + kl_ - i; }
    const double* row(std::size_t i) const noexcept {
        return data_.data() + i * width() + kl_ - i;
    }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> data_;
};

/// LU factorisation of a BandMatrix.
///
/// Elimination runs without pivoting first; if a pivot smaller than 1e-12 of
/// its row maximum turns up, the factorisation restarts with partial pivoting.
/// Throws SingularJacobian on an exactly singular matrix.
class BandLU {
public:
    BandLU() = default;
    explicit BandLU(const BandMatrix& a) { factor(a); }

    void factor(const BandMatrix& a);
    /// Overwrites b with A^{-1} b.
    void solve(std::span<double> b) const;

    bool pivoted() const noexcept { return pivoted_; }

private:
    bool eliminate(bool pivot);

    BandMatrix lu_;
    std::vector<std::size_t> perm_;
    std::vector<double> inverse_diagonal_;
    bool pivoted_ = false;
    std::size_t fill_ = 0; ///< super-diagonals in use after elimination
};

} // namespace hrnls
