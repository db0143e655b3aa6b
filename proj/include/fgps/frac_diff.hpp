#pragma once

// Periodic fractional derivative with sliding memory length L, in the reduced
// form with constant integration limits: for 0 < γ < 1,
//
//   D^γ_L f(t) = L^{1-γ} / Γ(2-γ) · ∫_0^1 f'(t - L y^{1/(1-γ)}) dy.
//
// Applied to the trigonometric interpolant of grid data this yields a
// circulant differentiation matrix whose entries are quadratures of cardinal
// derivatives.

#include "fgps/error.hpp"
#include "fgps/fourier.hpp"
#include "fgps/gegenbauer.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace fgps {

using WarningSink = std::function<void(const std::string&)>;

inline void stderr_warning(const std::string& message)
{
    std::cerr << "warning: " << message << '\n';
}

namespace detail {

inline void check_fractional_order(double gamma)
{
    require(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0, ErrorKind::InvalidParameter,
            "fractional order must lie in (0,1), got " + std::to_string(gamma));
}

inline void check_memory_length(double memory_len)
{
    require(std::isfinite(memory_len) && memory_len > 0.0, ErrorKind::InvalidParameter,
            "memory length must be positive, got " + std::to_string(memory_len));
}

} // namespace detail

/// L^{1-γ} / Γ(2-γ).
inline double fractional_scale(double gamma, double memory_len)
{
    return std::pow(memory_len, 1.0 - gamma) / std::tgamma(2.0 - gamma);
}

/// The error bound for the collocation scheme assumes L > 1 - γ.
inline bool memory_length_hypothesis_holds(double gamma, double memory_len)
{
    return memory_len > 1.0 - gamma;
}

/// ∫_0^1 F_s'(x_r - L y^{1/(1-γ)}) dy on the rule's shifted nodes.
inline double fgpsq_entry(const PeriodicGrid& grid, const QuadratureRule& rule, double gamma,
                          double memory_len, int r, int s)
{
    detail::check_fractional_order(gamma);
    detail::check_memory_length(memory_len);
    detail::check_node_index(grid, r);
    detail::check_node_index(grid, s);
    const double power = 1.0 / (1.0 - gamma);
    const double xr = grid.node(r);
    return integrate_function(rule, [&](double y) {
        return cardinal_deriv(grid, s, xr - memory_len * std::pow(y, power));
    });
}

/// Circulant fractional differentiation matrix, stored as its first row and
/// first column (2N - 1 numbers).
class FracDiffMatrix {
public:
    FracDiffMatrix(PeriodicGrid grid, double gamma, double memory_len, std::vector<double> first_row,
                   std::vector<double> first_col)
        : grid_(std::move(grid)), gamma_(gamma), memory_len_(memory_len),
          scale_(fractional_scale(gamma, memory_len))
    {
        const auto n = static_cast<std::size_t>(grid_.size());
        detail::require(first_row.size() == n && first_col.size() == n, ErrorKind::InvalidInput,
                        "Toeplitz row/column length must equal the grid size");
        detail::require(first_row[0] == first_col[0], ErrorKind::InvalidInput,
                        "Toeplitz row and column must share their corner entry");
        diagonals_ = std::move(first_row);
        diagonals_.insert(diagonals_.end(), first_col.begin() + 1, first_col.end());
    }

    const PeriodicGrid& grid() const noexcept { return grid_; }
    int size() const noexcept { return grid_.size(); }
    double gamma() const noexcept { return gamma_; }
    double memory_len() const noexcept { return memory_len_; }
    double scale() const noexcept { return scale_; }

    /// Distinct stored values: first row, then first column without the corner.
    std::span<const double> diagonals() const noexcept { return diagonals_; }
    std::size_t storage_size() const noexcept { return diagonals_.size(); }

    std::span<const double> first_row() const noexcept
    {
        return std::span<const double>(diagonals_).first(static_cast<std::size_t>(size()));
    }

    std::vector<double> first_col() const
    {
        std::vector<double> col(static_cast<std::size_t>(size()));
        for (int r = 0; r < size(); ++r)
            col[r] = entry(r, 0);
        return col;
    }

    double entry(int r, int s) const noexcept
    {
        if (s >= r)
            return diagonals_[static_cast<std::size_t>(s - r)];
        return diagonals_[static_cast<std::size_t>(size() - 1 + (r - s))];
    }

private:
    PeriodicGrid grid_;
    double gamma_;
    double memory_len_;
    double scale_;
    std::vector<double> diagonals_;
};

/// Builds the γth-order matrix, 0 < γ < 1, from N quadratures (one per diagonal).
inline FracDiffMatrix build_fdm(const PeriodicGrid& grid, const QuadratureRule& rule, double gamma,
                                double memory_len, const WarningSink& warn = stderr_warning)
{
    detail::check_fractional_order(gamma);
    detail::check_memory_length(memory_len);
    if (!memory_length_hypothesis_holds(gamma, memory_len) && warn) {
        std::ostringstream msg;
        msg << "memory length L=" << memory_len << " does not exceed 1-gamma=" << 1.0 - gamma
            << "; the collocation error bound does not apply";
        warn(msg.str());
    }

    const int n = grid.size();
    const double scale = fractional_scale(gamma, memory_len);
    // Circulant: column 0 determines every diagonal.
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
        col[r] = scale * fgpsq_entry(grid, rule, gamma, memory_len, r, 0);
    std::vector<double> row(static_cast<std::size_t>(n));
    row[0] = col[0];
    for (int s = 1; s < n; ++s)
        row[s] = col[static_cast<std::size_t>(n - s)];
    return FracDiffMatrix(grid, gamma, memory_len, std::move(row), std::move(col));
}

inline std::vector<double> apply_fd(const FracDiffMatrix& d, std::span<const double> samples)
{
    detail::require(samples.size() == static_cast<std::size_t>(d.size()), ErrorKind::InvalidInput,
                    "sample count does not match operator size");
    std::vector<double> out(samples.size(), 0.0);
    for (int r = 0; r < d.size(); ++r) {
        double acc = 0.0;
        for (int s = 0; s < d.size(); ++s)
            acc += d.entry(r, s) * samples[s];
        out[r] = acc;
    }
    return out;
}

namespace detail {

// 10-point Gauss-Legendre rule on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 5> kGl10Nodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGl10Weights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

template <class F>
double composite_gauss_legendre(F&& g, std::size_t panels)
{
    const double h = 1.0 / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * h;
        double acc = 0.0;
        for (std::size_t k = 0; k < kGl10Nodes.size(); ++k) {
            const double dx = 0.5 * h * kGl10Nodes[k];
            acc += kGl10Weights[k] * (g(mid - dx) + g(mid + dx));
        }
        total += 0.5 * h * acc;
    }
    return total;
}

} // namespace detail

struct OracleOptions {
    double tol = 1e-12;
    int min_levels = 3;
    int max_levels = 20;
};

/// Reference value of D^γ_L f(t) from f', independent of the grid/cardinal
/// machinery. With p = 1/(1-γ) and y = e^{-r/p},
///   ∫_0^1 f'(t - L y^p) dy = (1/p) ∫_0^∞ f'(t - L e^{-r}) e^{-r/p} dr,
/// which stays smooth as γ → 1 where the y-form concentrates in a layer of
/// width ~1/p at y = 1. The range is cut at R = 40 + ln max(L,1) and the tail
/// added as f'(t) e^{-R/p}. Composite 10-point Gauss-Legendre on [0,R], panel
/// count doubled until two successive estimates agree within `tol`.
template <class FPrime>
double fd_oracle(FPrime&& f_prime, double gamma, double memory_len, double t,
                 const OracleOptions& options = {})
{
    detail::check_fractional_order(gamma);
    detail::check_memory_length(memory_len);
    const double p = 1.0 / (1.0 - gamma);
    const double range = 40.0 + std::log(std::max(memory_len, 1.0));
    const auto integrand = [&](double u) {
        const double r = range * u;
        return range / p * f_prime(t - memory_len * std::exp(-r)) * std::exp(-r / p);
    };
    const double tail = f_prime(t) * std::exp(-range / p);

    double previous = detail::composite_gauss_legendre(integrand, 1);
    for (int level = 1; level <= options.max_levels; ++level) {
        const double current = detail::composite_gauss_legendre(integrand, std::size_t{1} << level);
        if (level >= options.min_levels && std::abs(current - previous) <= options.tol)
            return fractional_scale(gamma, memory_len) * (current + tail);
        previous = current;
    }
    throw NumericalFailure("fractional derivative oracle did not reach tolerance",
                           static_cast<std::size_t>(options.max_levels),
                           fractional_scale(gamma, memory_len) * (previous + tail));
}

template <class FPrime>
double fd_oracle(FPrime&& f_prime, double gamma, double memory_len, double t, double tol)
{
    OracleOptions options;
    options.tol = tol;
    return fd_oracle(std::forward<FPrime>(f_prime), gamma, memory_len, t, options);
}

} // namespace fgps
