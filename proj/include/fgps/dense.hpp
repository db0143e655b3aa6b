#pragma once

#include "fgps/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fgps {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    std::vector<double> multiply(std::span<const double> x) const
    {
        detail::require(x.size() == cols_, ErrorKind::InvalidInput, "matrix-vector size mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            double acc = 0.0;
            const auto rr = row(r);
            for (std::size_t c = 0; c < cols_; ++c)
                acc += rr[c] * x[c];
            y[r] = acc;
        }
        return y;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

/// LU factorization with partial (row) pivoting, PA = LU, stored in place.
class LuDecomposition {
public:
    explicit LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(lu_.rows())
    {
        detail::require(lu_.is_square(), ErrorKind::InvalidInput, "LU needs a square matrix");
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i)
            perm_[i] = i;

        const double scale = max_abs(lu_.data());
        const double tiny = static_cast<double>(std::max<std::size_t>(n, 1))
                            * std::numeric_limits<double>::epsilon() * scale;

        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            double best = std::abs(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::abs(lu_(i, k)) > best) {
                    best = std::abs(lu_(i, k));
                    p = i;
                }
            }
            if (best <= tiny || best == 0.0)
                throw SingularSystem("zero pivot at column " + std::to_string(k), k);
            if (p != k) {
                std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
                std::swap(perm_[k], perm_[p]);
            }
            const double pivot = lu_(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double m = lu_(i, k) / pivot;
                lu_(i, k) = m;
                if (m == 0.0)
                    continue;
                for (std::size_t j = k + 1; j < n; ++j)
                    lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    std::vector<double> solve(std::span<const double> b) const
    {
        const std::size_t n = lu_.rows();
        detail::require(b.size() == n, ErrorKind::InvalidInput, "right-hand side size mismatch");
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j)
                acc -= lu_(i, j) * x[j];
            x[i] = acc;
        }
        for (std::size_t i = n; i-- > 0;) {
            double acc = x[i];
            for (std::size_t j = i + 1; j < n; ++j)
                acc -= lu_(i, j) * x[j];
            x[i] = acc / lu_(i, i);
        }
        return x;
    }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

} // namespace fgps
