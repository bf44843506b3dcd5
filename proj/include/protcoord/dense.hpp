#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace protcoord {

// Row-major square complex matrix. Networks here are at most a few hundred
// buses, so a dense representation is all the solver needs.
class ComplexMatrix {
public:
    using value_type = std::complex<double>;

    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const noexcept { return n_; }
    value_type& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    const value_type& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

    std::vector<value_type> multiply(std::span<const value_type> x) const;
    double max_abs() const noexcept;

private:
    std::size_t n_ = 0;
    std::vector<value_type> data_;
};

// LU factorisation with partial pivoting, P*A = L*U stored in place.
// Throws SolveError when a pivot vanishes relative to the matrix scale.
class LuFactor {
public:
    explicit LuFactor(ComplexMatrix a);

    std::size_t size() const noexcept { return lu_.size(); }
    std::vector<std::complex<double>> solve(std::span<const std::complex<double>> b) const;
    // Solution of A x = e_k.
    std::vector<std::complex<double>> solve_unit(std::size_t k) const;

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace protcoord
