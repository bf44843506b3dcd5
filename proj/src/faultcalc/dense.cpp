#include <cmath>
#include <limits>
#include <numeric>

#include "protcoord/dense.hpp"
#include "protcoord/error.hpp"

namespace protcoord {

std::vector<ComplexMatrix::value_type> ComplexMatrix::multiply(std::span<const value_type> x) const {
    std::vector<value_type> y(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        value_type acc{};
        for (std::size_t c = 0; c < n_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

LuFactor::LuFactor(ComplexMatrix a) : lu_(std::move(a)), perm_(lu_.size()) {
    const std::size_t n = lu_.size();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double tiny = lu_.max_abs() * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t r = k + 1; r < n; ++r)
            if (const double v = std::abs(lu_(r, k)); v > best) {
                best = v;
                p = r;
            }
        if (!(best > tiny)) throw SolveError("singular admittance matrix (pivot " + std::to_string(k) + ")");
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
            std::swap(perm_[k], perm_[p]);
        }
        const auto pivot = lu_(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const auto f = lu_(r, k) / pivot;
            lu_(r, k) = f;
            if (f == std::complex<double>{}) continue;
            for (std::size_t c = k + 1; c < n; ++c) lu_(r, c) -= f * lu_(k, c);
        }
    }
}

std::vector<std::complex<double>> LuFactor::solve(std::span<const std::complex<double>> b) const {
    const std::size_t n = lu_.size();
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

std::vector<std::complex<double>> LuFactor::solve_unit(std::size_t k) const {
    std::vector<std::complex<double>> e(lu_.size());
    e[k] = 1.0;
    return solve(e);
}

}  // namespace protcoord
