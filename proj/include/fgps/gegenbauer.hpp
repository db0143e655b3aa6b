#pragma once

// Gegenbauer polynomials in the standardization G_n(1) = 1, their Gauss
// zeros, and plain-integral quadrature weights on [0,1] at the shifted zeros.
// lambda = 0 gives Chebyshev T_n, lambda = 1/2 gives Legendre P_n.

#include "fgps/dense.hpp"
#include "fgps/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fgps {

/// Indices at or below this bound are rejected; the standardization ratios
/// degenerate as lambda approaches -1/2.
inline constexpr double kMinGegenbauerIndex = -0.5 + 1e-8;

namespace detail {

inline void check_gegenbauer_index(double lambda)
{
    require(std::isfinite(lambda) && lambda > kMinGegenbauerIndex, ErrorKind::InvalidParameter,
            "Gegenbauer index must exceed -1/2, got " + std::to_string(lambda));
}

/// Value and first derivative of G_n at x, by the standardized recurrence
///   (k + 2λ) G_{k+1} = 2(k + λ) x G_k - k G_{k-1},   G_0 = 1, G_1 = x.
template <class T = double>
std::pair<T, T> gegenbauer_with_derivative(int n, T lambda, T x)
{
    if (n == 0)
        return {T(1), T(0)};
    T p_prev = 1, d_prev = 0;
    T p = x, d = 1;
    for (int k = 1; k < n; ++k) {
        const T c = T(1) / (k + 2 * lambda);
        const T p_next = c * (2 * (k + lambda) * x * p - k * p_prev);
        const T d_next = c * (2 * (k + lambda) * (p + x * d) - k * d_prev);
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
    }
    return {p, d};
}

} // namespace detail

/// G_n^λ(x) with G_n^λ(1) = 1.
inline double gegenbauer_eval(int n, double lambda, double x)
{
    detail::require(n >= 0, ErrorKind::InvalidParameter, "polynomial degree must be non-negative");
    detail::check_gegenbauer_index(lambda);
    return detail::gegenbauer_with_derivative(n, lambda, x).first;
}

/// All of G_0(x) .. G_n(x).
inline std::vector<double> gegenbauer_sequence(int n, double lambda, double x)
{
    std::vector<double> g(static_cast<std::size_t>(n) + 1);
    g[0] = 1.0;
    if (n >= 1)
        g[1] = x;
    for (int k = 1; k < n; ++k)
        g[k + 1] = (2.0 * (k + lambda) * x * g[k] - k * g[k - 1]) / (k + 2.0 * lambda);
    return g;
}

/// The n_g + 1 zeros of G_{n_g+1}^λ, strictly increasing and exactly symmetric.
///
/// Each zero in (0,1) is refined by Newton's method, falling back to bisection
/// whenever a step leaves the current sign-change bracket. Initial guesses come
/// from the Chebyshev-like asymptotic θ_k = (k + λ/2 - 1/2)π / (n + λ), which
/// reduces to the exact Chebyshev zeros at λ = 0. Negative zeros are mirrored.
inline std::vector<double> gg_nodes(int n_g, double lambda)
{
    detail::require(n_g >= 0, ErrorKind::InvalidParameter, "n_g must be non-negative");
    detail::check_gegenbauer_index(lambda);

    const int n = n_g + 1;
    const int half = n / 2;
    const double pi = std::numbers::pi;
    const auto theta = [&](double k) { return (k + 0.5 * lambda - 0.5) * pi / (n + lambda); };

    // Refinement runs in extended precision so the result is the double nearest
    // the true zero; in double, evaluation rounding stalls Newton a few ulps away.
    using Ext = long double;
    const Ext lam = lambda;
    const auto eval = [&](Ext z) { return detail::gegenbauer_with_derivative<Ext>(n, lam, z); };

    std::vector<double> positive(static_cast<std::size_t>(half));
    for (int k = 1; k <= half; ++k) {
        Ext x = std::cos(theta(k));
        Ext hi = std::cos(std::clamp(theta(k - 0.5), 0.0, pi / 2));
        Ext lo = std::cos(std::clamp(theta(k + 0.5), 0.0, pi / 2));
        Ext f_lo = eval(lo).first;
        Ext f_hi = eval(hi).first;
        const bool bracketed = f_lo * f_hi < 0;

        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [f, df] = eval(x);
            if (f == 0) {
                converged = true;
                break;
            }
            if (bracketed) {
                if ((f < 0) == (f_lo < 0)) {
                    lo = x;
                    f_lo = f;
                } else {
                    hi = x;
                    f_hi = f;
                }
            }
            Ext next = x - f / df;
            if (bracketed && !(next > std::min(lo, hi) && next < std::max(lo, hi)))
                next = (lo + hi) / 2;
            const Ext step = next > x ? next - x : x - next;
            x = next;
            if (step <= 4 * std::numeric_limits<Ext>::epsilon() * std::max<Ext>(1, x < 0 ? -x : x)) {
                converged = true;
                break;
            }
        }
        if (!converged || !(x > 0 && x < 1))
            throw NumericalFailure("Gegenbauer zero refinement did not converge for root "
                                       + std::to_string(k),
                                   static_cast<std::size_t>(k), static_cast<double>(x));
        positive[static_cast<std::size_t>(k - 1)] = static_cast<double>(x);
    }

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    for (double x : positive)
        nodes.push_back(-x);
    if (n % 2 == 1)
        nodes.push_back(0.0);
    for (auto it = positive.rbegin(); it != positive.rend(); ++it)
        nodes.push_back(*it);

    for (std::size_t j = 1; j < nodes.size(); ++j) {
        if (!(nodes[j] > nodes[j - 1]))
            throw NumericalFailure("Gegenbauer zeros are not strictly increasing at index "
                                       + std::to_string(j),
                                   j, nodes[j]);
    }
    return nodes;
}

/// Weights w_j with Σ w_j p(y_j) = ∫_0^1 p(y) dy for every polynomial p of
/// degree < nodes.size(), for arbitrary distinct nodes in (0,1).
///
/// Expands the interpolant in shifted Legendre polynomials, whose integrals over
/// [0,1] vanish beyond degree 0, and solves the transposed Vandermonde system
/// P w = e_0 by pivoted LU. Cost is cubic in the node count.
inline std::vector<double> plain_integral_weights(std::span<const double> nodes)
{
    const std::size_t n = nodes.size();
    detail::require(n > 0, ErrorKind::InvalidInput, "at least one node is required");
    for (double y : nodes)
        detail::require(y > 0.0 && y < 1.0, ErrorKind::InvalidInput, "nodes must lie in (0,1)");
    std::vector<double> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 1; j < n; ++j)
        detail::require(sorted[j] - sorted[j - 1] >= 1e-14, ErrorKind::InvalidInput,
                        "nodes are (nearly) coincident");

    Matrix legendre(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto p = gegenbauer_sequence(static_cast<int>(n) - 1, 0.5, 2.0 * nodes[j] - 1.0);
        for (std::size_t k = 0; k < n; ++k)
            legendre(k, j) = p[k];
    }
    std::vector<double> rhs(n, 0.0);
    rhs[0] = 1.0;
    return LuDecomposition(std::move(legendre)).solve(rhs);
}

namespace detail {

/// Plain-integral weights on [0,1] at the shifted Gauss zeros of G_{n_g+1}^λ.
///
/// The nodal interpolant is expanded in G_0..G_{n_g} using the discrete
/// orthogonality of the Gauss rule for the weight (1-x^2)^{λ-1/2}. With h_k the
/// norms and M_k = ∫_{-1}^{1} G_k, the Gauss weight is the reciprocal Christoffel
/// sum, so
///   w_j = (Σ_k G_k(z_j) M_k / h_k) / (Σ_k G_k(z_j)^2 / h_k) / 2.
/// Only norm ratios are needed; they are accumulated by recurrence.
inline std::vector<double> gauss_plain_weights(std::span<const double> nodes, double lambda)
{
    const int n_g = static_cast<int>(nodes.size()) - 1;
    std::vector<double> inv_norm(nodes.size());
    std::vector<double> moment(nodes.size(), 0.0);
    double h = 1.0;
    for (int k = 0; k <= n_g; ++k) {
        if (k == 1)
            h *= 1.0 / (2.0 * (1.0 + lambda));
        else if (k >= 2)
            h *= k * (k - 1.0 + lambda) / ((k + lambda) * (k - 1.0 + 2.0 * lambda));
        inv_norm[k] = 1.0 / h;
        if (k == 0)
            moment[k] = 2.0;
        else if (k % 2 == 0)
            moment[k] = ((2.0 * lambda + k) / (k + 1.0) - k / (2.0 * lambda + k - 1.0)) / (k + lambda);
    }

    std::vector<double> w(nodes.size());
    const std::size_t m = nodes.size();
    for (std::size_t j = m / 2; j < m; ++j) {
        const auto g = gegenbauer_sequence(n_g, lambda, nodes[j]);
        double num = 0.0, den = 0.0;
        for (int k = 0; k <= n_g; ++k) {
            num += g[k] * moment[k] * inv_norm[k];
            den += g[k] * g[k] * inv_norm[k];
        }
        w[j] = 0.5 * num / den;
        w[m - 1 - j] = w[j];
    }
    return w;
}

} // namespace detail

/// Gegenbauer-Gauss rule on (-1,1) shifted to (0,1), with plain-integral weights.
/// Immutable once built.
struct QuadratureRule {
    double lambda = 0.0;
    int n_g = 0;
    std::vector<double> nodes;
    std::vector<double> shifted_nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

inline QuadratureRule make_quadrature_rule(int n_g, double lambda = 0.0)
{
    QuadratureRule rule;
    rule.lambda = lambda;
    rule.n_g = n_g;
    rule.nodes = gg_nodes(n_g, lambda);
    rule.shifted_nodes.resize(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        rule.shifted_nodes[j] = (rule.nodes[j] + 1.0) / 2.0;
    rule.weights = detail::gauss_plain_weights(rule.nodes, lambda);
    for (double w : rule.weights)
        if (!std::isfinite(w))
            throw NumericalFailure("non-finite quadrature weight", 0, w);
    return rule;
}

inline double integrate_unit(const QuadratureRule& rule, std::span<const double> samples)
{
    detail::require(samples.size() == rule.weights.size(), ErrorKind::InvalidInput,
                    "expected " + std::to_string(rule.weights.size()) + " samples, got "
                        + std::to_string(samples.size()));
    double acc = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j)
        acc += rule.weights[j] * samples[j];
    return acc;
}

/// ∫_0^1 g(y) dy by sampling g at the rule's shifted nodes.
template <class F>
double integrate_function(const QuadratureRule& rule, F&& g)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j)
        acc += rule.weights[j] * g(rule.shifted_nodes[j]);
    return acc;
}

} // namespace fgps
