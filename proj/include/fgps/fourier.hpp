#pragma once

#include "fgps/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace fgps {

/// N equispaced nodes T j / N on [0, T), N even.
class PeriodicGrid {
public:
    PeriodicGrid(double period, int n) : period_(period), n_(n)
    {
        detail::require(std::isfinite(period) && period > 0.0, ErrorKind::InvalidParameter,
                        "grid period must be positive");
        detail::require(n > 0 && n % 2 == 0, ErrorKind::InvalidParameter,
                        "grid size must be a positive even integer, got " + std::to_string(n));
        nodes_.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            nodes_[j] = period * j / n;
    }

    double period() const noexcept { return period_; }
    int size() const noexcept { return n_; }
    double node(int j) const noexcept { return nodes_[static_cast<std::size_t>(j)]; }
    std::span<const double> nodes() const noexcept { return nodes_; }

    friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b)
    {
        return a.period_ == b.period_ && a.n_ == b.n_;
    }

private:
    double period_;
    int n_;
    std::vector<double> nodes_;
};

namespace detail {

inline constexpr double kCardinalSeriesThreshold = 1e-7;
inline constexpr double kCardinalDerivSumThreshold = 0.25;

inline void check_node_index(const PeriodicGrid& grid, int l)
{
    require(l >= 0 && l < grid.size(), ErrorKind::InvalidInput,
            "node index " + std::to_string(l) + " out of range");
}

/// The cardinal argument ν = π(x - x_l)/T, reduced using exact arithmetic in
/// grid units u = xN/T - l so that grid nodes map to exact integers.
struct CardinalArg {
    double nu;       // reduced to [-π/2, π/2]; F_l is π-periodic in ν for even N
    double sin_n_nu; // sin(Nν)
    double cos_n_nu; // cos(Nν)
};

inline CardinalArg cardinal_arg(const PeriodicGrid& grid, int l, double x)
{
    const double n = grid.size();
    const double u = x * n / grid.period() - l;
    const double ur = std::remainder(u, n);
    const double k = std::nearbyint(ur);
    double f = ur - k;
    if (std::abs(f) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u)))
        f = 0.0;
    const double sign = std::fmod(k, 2.0) == 0.0 ? 1.0 : -1.0;
    const double nu = std::numbers::pi * (k + f) / n;
    return {nu, sign * std::sin(std::numbers::pi * f), sign * std::cos(std::numbers::pi * f)};
}

} // namespace detail

/// Trigonometric cardinal function F_l(x) = sin(Nν) cot(ν) / N, ν = π(x - x_l)/T.
inline double cardinal_eval(const PeriodicGrid& grid, int l, double x)
{
    detail::check_node_index(grid, l);
    const int n = grid.size();
    const auto a = detail::cardinal_arg(grid, l, x);
    const double s = std::sin(a.nu);
    if (std::abs(s) < detail::kCardinalSeriesThreshold) {
        // F = (1 + 2 Σ_{k<N/2} cos 2kν + cos Nν) / N, expanded to fourth order.
        const double e2 = a.nu * a.nu;
        const double n2 = static_cast<double>(n) * n;
        double c4 = n2 * n2 / 24.0;
        for (int k = 1; k < n / 2; ++k)
            c4 += 4.0 * std::pow(static_cast<double>(k), 4) / 3.0;
        return 1.0 - (n2 + 2.0) * e2 / 6.0 + c4 * e2 * e2 / n;
    }
    return a.sin_n_nu * std::cos(a.nu) / (n * s);
}

/// dF_l/dx. Closed form away from the node, the differentiated cosine sum
/// for |sin ν| < 1/4, and an odd Taylor series in ν when |sin ν| < 1e-7.
inline double cardinal_deriv(const PeriodicGrid& grid, int l, double x)
{
    detail::check_node_index(grid, l);
    const int n = grid.size();
    const double scale = std::numbers::pi / grid.period();
    const auto a = detail::cardinal_arg(grid, l, x);
    const double s = std::sin(a.nu);
    if (std::abs(s) < detail::kCardinalSeriesThreshold) {
        // From F = (1 + 2 Σ_{k<N/2} cos 2kν + cos Nν) / N.
        const double e = a.nu;
        double c1 = static_cast<double>(n) * n;
        double c3 = std::pow(static_cast<double>(n), 4) / 6.0;
        for (int k = 1; k < n / 2; ++k) {
            const double k2 = static_cast<double>(k) * k;
            c1 += 8.0 * k2;
            c3 += 16.0 * k2 * k2 / 3.0;
        }
        return -scale * (c1 * e - c3 * e * e * e) / n;
    }
    if (std::abs(s) < detail::kCardinalDerivSumThreshold) {
        // Near the node the closed form cancels; differentiate the cosine sum instead.
        double acc = 0.5 * n * a.sin_n_nu;
        for (int k = 1; k < n / 2; ++k)
            acc += 2.0 * k * std::sin(2.0 * k * a.nu);
        return -2.0 * scale * acc / n;
    }
    const double c = std::cos(a.nu);
    return scale * (n * a.cos_n_nu * c / s - a.sin_n_nu / (s * s)) / n;
}

inline std::vector<double> cardinal_values(const PeriodicGrid& grid, double x)
{
    std::vector<double> v(static_cast<std::size_t>(grid.size()));
    for (int l = 0; l < grid.size(); ++l)
        v[l] = cardinal_eval(grid, l, x);
    return v;
}

inline double interpolate_1d(const PeriodicGrid& grid, std::span<const double> samples, double x)
{
    detail::require(samples.size() == static_cast<std::size_t>(grid.size()), ErrorKind::InvalidInput,
                    "sample count does not match grid size");
    double acc = 0.0;
    for (int l = 0; l < grid.size(); ++l)
        acc += samples[l] * cardinal_eval(grid, l, x);
    return acc;
}

/// Values u(x_l, t_j) on a tensor grid; row l runs over t.
class GridFunction2D {
public:
    GridFunction2D(PeriodicGrid grid_x, PeriodicGrid grid_t)
        : grid_x_(std::move(grid_x)), grid_t_(std::move(grid_t)),
          values_(static_cast<std::size_t>(grid_x_.size()) * grid_t_.size(), 0.0)
    {
    }

    GridFunction2D(PeriodicGrid grid_x, PeriodicGrid grid_t, std::vector<double> values)
        : grid_x_(std::move(grid_x)), grid_t_(std::move(grid_t)), values_(std::move(values))
    {
        detail::require(values_.size() == static_cast<std::size_t>(grid_x_.size()) * grid_t_.size(),
                        ErrorKind::InvalidInput, "grid function size does not match its grids");
    }

    template <class F>
    static GridFunction2D sample(const PeriodicGrid& gx, const PeriodicGrid& gt, F&& u)
    {
        GridFunction2D g(gx, gt);
        for (int l = 0; l < gx.size(); ++l)
            for (int j = 0; j < gt.size(); ++j)
                g(l, j) = u(gx.node(l), gt.node(j));
        return g;
    }

    const PeriodicGrid& grid_x() const noexcept { return grid_x_; }
    const PeriodicGrid& grid_t() const noexcept { return grid_t_; }

    double& operator()(int l, int j) noexcept { return values_[index(l, j)]; }
    double operator()(int l, int j) const noexcept { return values_[index(l, j)]; }

    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t index(int l, int j) const noexcept
    {
        return static_cast<std::size_t>(l) * grid_t_.size() + static_cast<std::size_t>(j);
    }

    PeriodicGrid grid_x_;
    PeriodicGrid grid_t_;
    std::vector<double> values_;
};

/// Tensor-product trigonometric interpolant Σ_l Σ_j u_{l,j} F_l(x) F_j(t).
inline double tensor_interpolate(const GridFunction2D& u, double x, double t)
{
    const auto fx = cardinal_values(u.grid_x(), x);
    const auto ft = cardinal_values(u.grid_t(), t);
    double acc = 0.0;
    for (int l = 0; l < u.grid_x().size(); ++l) {
        double row = 0.0;
        for (int j = 0; j < u.grid_t().size(); ++j)
            row += u(l, j) * ft[j];
        acc += fx[l] * row;
    }
    return acc;
}

} // namespace fgps
