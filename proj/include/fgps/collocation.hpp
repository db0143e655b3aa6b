#pragma once

// Global collocation system for a(x,t) D^α_x u + b(x,t) D^β_t u = f at the
// interior nodes (l, j) ∈ [1, N1) × [1, N2). The known values u(0, t_j) = h(t_j)
// and u(x_l, 0) = g(x_l) move to the right-hand side.

#include "fgps/dense.hpp"
#include "fgps/error.hpp"
#include "fgps/fourier.hpp"
#include "fgps/frac_diff.hpp"
#include "fgps/problem_spec.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fgps {

/// 𝒩(j, l) = (l - 1) + (N1 - 1)(j - 1) + 1 for 1-based j ∈ [1, N2), l ∈ [1, N1).
/// Row j of the block structure holds the spatial unknowns at time t_j.
class IndexMap {
public:
    IndexMap(int n1, int n2) : n1_(n1), n2_(n2)
    {
        for (int n : {n1, n2})
            detail::require(n >= 4 && n % 2 == 0, ErrorKind::InvalidParameter,
                            "grid sizes must be even and at least 4, got " + std::to_string(n));
    }

    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return n2_; }
    int rows() const noexcept { return n2_ - 1; }
    int cols() const noexcept { return n1_ - 1; }
    std::size_t unknowns() const noexcept
    {
        return static_cast<std::size_t>(n1_ - 1) * static_cast<std::size_t>(n2_ - 1);
    }

    /// 1-based entry; j is the temporal and l the spatial interior index.
    int at(int j, int l) const noexcept { return (l - 1) + (n1_ - 1) * (j - 1) + 1; }

    /// 0-based unknown for interior node (l, j).
    std::size_t unknown(int l, int j) const noexcept { return static_cast<std::size_t>(at(j, l) - 1); }

    std::vector<int> entries() const
    {
        std::vector<int> e;
        e.reserve(unknowns());
        for (int j = 1; j <= rows(); ++j)
            for (int l = 1; l <= cols(); ++l)
                e.push_back(at(j, l));
        return e;
    }

private:
    int n1_;
    int n2_;
};

inline IndexMap build_index_map(int n1, int n2) { return IndexMap(n1, n2); }

struct CollocationSystem {
    Matrix a_matrix;
    std::vector<double> f_vector;
    IndexMap index_map;
    std::size_t structural_nonzeros = 0;
    PeriodicGrid grid_x;
    PeriodicGrid grid_t;
    std::vector<double> g_at_x; // g(x_l), l = 0..N1-1
    std::vector<double> h_at_t; // h(t_j), j = 0..N2-1
};

/// Number of positions in the spatial-block / temporal-diagonal pattern.
inline std::size_t pattern_nonzeros(int n1, int n2)
{
    return static_cast<std::size_t>(n1 - 1) * static_cast<std::size_t>(n2 - 1)
           * static_cast<std::size_t>(n1 + n2 - 3);
}

inline CollocationSystem assemble(const ProblemSpec& problem, const FracDiffMatrix& d_alpha,
                                  const FracDiffMatrix& d_beta)
{
    validate(problem);
    const PeriodicGrid& gx = d_alpha.grid();
    const PeriodicGrid& gt = d_beta.grid();
    detail::require(gx.period() == problem.period_x && gt.period() == problem.period_t,
                    ErrorKind::InvalidInput, "operator grids do not match the problem periods");
    const auto order_matches = [](double op, double order) {
        return op == order || (order == 1.0 && op == kNearUnitOrder);
    };
    detail::require(order_matches(d_alpha.gamma(), problem.alpha)
                        && order_matches(d_beta.gamma(), problem.beta),
                    ErrorKind::InvalidInput, "operator orders do not match the problem orders");
    detail::require(d_alpha.memory_len() == problem.memory_len
                        && d_beta.memory_len() == problem.memory_len,
                    ErrorKind::InvalidInput, "operator memory length does not match the problem");

    const int n1 = gx.size();
    const int n2 = gt.size();
    IndexMap map(n1, n2);

    std::vector<double> g(static_cast<std::size_t>(n1));
    std::vector<double> h(static_cast<std::size_t>(n2));
    for (int l = 0; l < n1; ++l)
        g[l] = problem.init_g(gx.node(l));
    for (int j = 0; j < n2; ++j)
        h[j] = problem.init_h(gt.node(j));

    const std::size_t n = map.unknowns();
    Matrix a(n, n);
    std::vector<double> f(n);
    std::size_t pattern = 0;

    for (int j = 1; j < n2; ++j) {
        const double tj = gt.node(j);
        for (int l = 1; l < n1; ++l) {
            const double xl = gx.node(l);
            const double al = problem.coeff_a(xl, tj);
            const double bl = problem.coeff_b(xl, tj);
            const std::size_t row = map.unknown(l, j);

            for (int k = 1; k < n1; ++k) {
                if (k != l) {
                    a(row, map.unknown(k, j)) = al * d_alpha.entry(l, k);
                    ++pattern;
                }
            }
            for (int k = 1; k < n2; ++k) {
                if (k != j) {
                    a(row, map.unknown(l, k)) = bl * d_beta.entry(j, k);
                    ++pattern;
                }
            }
            a(row, row) = al * d_alpha.entry(l, l) + bl * d_beta.entry(j, j);
            ++pattern;

            f[row] = problem.source_f(xl, tj) - al * d_alpha.entry(l, 0) * h[j]
                     - bl * d_beta.entry(j, 0) * g[l];
        }
    }

    return CollocationSystem{std::move(a), std::move(f), map, pattern, gx, gt, std::move(g), std::move(h)};
}

struct CollocationSolution {
    std::vector<double> unknowns;
    GridFunction2D grid_values; // full N1 × N2 grid, row 0 = h, column 0 = g
    double residual_inf = 0.0;
};

inline constexpr double kResidualTolerance = 1e-10;

inline CollocationSolution solve(const CollocationSystem& system)
{
    const IndexMap& map = system.index_map;
    auto u = LuDecomposition(system.a_matrix).solve(system.f_vector);

    auto r = system.a_matrix.multiply(u);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= system.f_vector[i];
    const double residual = max_abs(r);
    if (!(residual <= kResidualTolerance * (1.0 + max_abs(system.f_vector))))
        throw NumericalFailure("collocation residual " + std::to_string(residual) + " too large", 0,
                               residual);

    GridFunction2D full(system.grid_x, system.grid_t);
    for (int j = 0; j < map.n2(); ++j)
        full(0, j) = system.h_at_t[j];
    for (int l = 0; l < map.n1(); ++l)
        full(l, 0) = system.g_at_x[l];
    for (int j = 1; j < map.n2(); ++j)
        for (int l = 1; l < map.n1(); ++l)
            full(l, j) = u[map.unknown(l, j)];

    return CollocationSolution{std::move(u), std::move(full), residual};
}

/// σ_max / σ_min of a dense matrix; +∞ when σ_min vanishes.
inline double condition_number_2norm(const Matrix& a)
{
    detail::require(a.is_square(), ErrorKind::InvalidInput, "condition number needs a square matrix");
    const auto n = static_cast<Eigen::Index>(a.rows());
    if (n == 0)
        return 1.0;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
        a.data().data(), n, n);
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(view).singularValues();
    const double smax = sigma(0);
    const double smin = sigma(n - 1);
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

inline double condition_number_2norm(const CollocationSystem& system)
{
    return condition_number_2norm(system.a_matrix);
}

} // namespace fgps
