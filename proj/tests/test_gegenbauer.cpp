#include "fgps/gegenbauer.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fgps;

namespace {

double legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    if (n == 0)
        return p0;
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

} // namespace

TEST(GegenbauerEval, DegreeZeroIsOne)
{
    EXPECT_EQ(gegenbauer_eval(0, 0.3, 0.7), 1.0);
}

TEST(GegenbauerEval, ChebyshevSpecialCase)
{
    EXPECT_NEAR(gegenbauer_eval(2, 0.0, 0.5), -0.5, 1e-15);
    for (int n = 0; n <= 30; ++n)
        for (double x : {-0.9, -0.3, 0.1, 0.77})
            EXPECT_NEAR(gegenbauer_eval(n, 0.0, x), std::cos(n * std::acos(x)), 1e-13) << n << ' ' << x;
}

TEST(GegenbauerEval, LegendreSpecialCase)
{
    EXPECT_NEAR(gegenbauer_eval(3, 0.5, 0.2), -0.28, 1e-15);
    for (int n = 0; n <= 30; ++n)
        for (double x : {-0.95, -0.2, 0.4, 0.99})
            EXPECT_NEAR(gegenbauer_eval(n, 0.5, x), legendre(n, x), 1e-13) << n << ' ' << x;
}

TEST(GegenbauerEval, StandardizedAtOne)
{
    for (double lambda : {0.0, 0.25, 0.5, 1.0})
        for (int n = 0; n <= 60; ++n)
            EXPECT_NEAR(gegenbauer_eval(n, lambda, 1.0), 1.0, 1e-14) << n << ' ' << lambda;
}

TEST(GegenbauerEval, RejectsIndexAtOrBelowMinusHalf)
{
    EXPECT_THROW(gegenbauer_eval(2, -0.5, 0.1), Error);
    EXPECT_THROW(gegenbauer_eval(2, -0.7, 0.1), Error);
    EXPECT_THROW(gegenbauer_eval(2, -0.5 + 1e-9, 0.1), Error);
    EXPECT_NO_THROW(gegenbauer_eval(2, -0.49, 0.1));
}

TEST(GgNodes, SmallCases)
{
    const auto c = gg_nodes(1, 0.0);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0], -std::cos(std::numbers::pi / 4), 1e-15);
    EXPECT_NEAR(c[1], std::cos(std::numbers::pi / 4), 1e-15);

    const auto p = gg_nodes(1, 0.5);
    EXPECT_NEAR(p[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(p[1], 1.0 / std::sqrt(3.0), 1e-15);

    const auto z = gg_nodes(0, 0.9);
    ASSERT_EQ(z.size(), 1u);
    EXPECT_EQ(z[0], 0.0);
}

TEST(GgNodes, ChebyshevZerosClosedForm)
{
    const int n_g = 37;
    const auto nodes = gg_nodes(n_g, 0.0);
    const int n = n_g + 1;
    for (int j = 0; j < n; ++j) {
        const double expected = std::cos((2.0 * (n - 1 - j) + 1.0) * std::numbers::pi / (2.0 * n));
        EXPECT_NEAR(nodes[j], expected, 1e-14);
    }
}

TEST(GgNodes, ResidualAndOrderingSmallDegree)
{
    for (double lambda : {-0.4, 0.0, 0.25, 0.5, 1.0, 2.0})
        for (int n_g = 0; n_g <= 20; ++n_g) {
            const auto nodes = gg_nodes(n_g, lambda);
            ASSERT_EQ(nodes.size(), static_cast<std::size_t>(n_g + 1));
            EXPECT_TRUE(std::is_sorted(nodes.begin(), nodes.end()));
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                EXPECT_LT(std::abs(gegenbauer_eval(n_g + 1, lambda, nodes[j])), 1e-13);
                EXPECT_GT(nodes[j], -1.0);
                EXPECT_LT(nodes[j], 1.0);
            }
        }
}

// At high degree the raw residual |G(z)| is limited by the slope |G'(z)|
// times the rounding of z, so it is checked relative to that slope: each node
// must be within about one ulp of the true zero.
TEST(GgNodes, ScaledResidualLargeDegree)
{
    for (double lambda : {0.0, 0.5, 1.0})
        for (int n_g : {100, 400, 1000}) {
            const auto nodes = gg_nodes(n_g, lambda);
            ASSERT_EQ(nodes.size(), static_cast<std::size_t>(n_g + 1));
            for (double z : nodes) {
                const auto [g, dg] = detail::gegenbauer_with_derivative(n_g + 1, lambda, z);
                EXPECT_LE(std::abs(g), std::numeric_limits<double>::epsilon() * std::abs(dg) + 1e-13)
                    << "n_g=" << n_g << " lambda=" << lambda << " z=" << z;
            }
        }
}

TEST(GgNodes, Symmetry)
{
    for (double lambda : {0.0, 0.3, 0.5, 1.5})
        for (int n_g : {1, 2, 7, 50, 1000}) {
            const auto nodes = gg_nodes(n_g, lambda);
            for (int j = 0; j <= n_g; ++j)
                EXPECT_NEAR(nodes[j], -nodes[n_g - j], 1e-13);
        }
}

TEST(QuadratureRule, ShiftedNodesExact)
{
    const auto rule = make_quadrature_rule(25, 0.3);
    for (std::size_t j = 0; j < rule.size(); ++j)
        EXPECT_EQ(rule.shifted_nodes[j], (rule.nodes[j] + 1.0) / 2.0);
}

TEST(PlainWeights, SingleMidpoint)
{
    const std::vector<double> mid = {0.5};
    const auto w = plain_integral_weights(mid);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NEAR(w[0], 1.0, 1e-15);
}

TEST(PlainWeights, RejectsBadNodes)
{
    EXPECT_THROW(plain_integral_weights(std::vector<double>{0.2, 0.2 + 1e-16}), Error);
    EXPECT_THROW(plain_integral_weights(std::vector<double>{0.0, 0.5}), Error);
    EXPECT_THROW(plain_integral_weights(std::vector<double>{0.5, 1.2}), Error);
}

TEST(PlainWeights, CubicMomentAtEightNodes)
{
    const auto rule = make_quadrature_rule(8, 0.0);
    double s = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j)
        s += rule.weights[j] * std::pow(rule.shifted_nodes[j], 3);
    EXPECT_NEAR(s, 0.25, 1e-14);
}

TEST(PlainWeights, MatchFejerFirstRule)
{
    for (int n_g : {1, 4, 9, 32, 101}) {
        const auto rule = make_quadrature_rule(n_g, 0.0);
        const auto fejer = oracle::fejer_weights(n_g + 1);
        for (std::size_t j = 0; j < rule.size(); ++j)
            EXPECT_NEAR(rule.weights[j], 0.5 * fejer[j], 1e-14) << n_g << ' ' << j;
    }
}

TEST(PlainWeights, GeneralRouteAgreesWithRule)
{
    for (double lambda : {0.0, 0.5, 1.0, -0.3})
        for (int n_g : {0, 3, 10, 24}) {
            const auto rule = make_quadrature_rule(n_g, lambda);
            const auto general = plain_integral_weights(rule.shifted_nodes);
            for (std::size_t j = 0; j < rule.size(); ++j)
                EXPECT_NEAR(rule.weights[j], general[j], 1e-12) << lambda << ' ' << n_g << ' ' << j;
        }
}

TEST(PlainWeights, SumToOne)
{
    for (double lambda : {0.0, 0.25, 0.5, 1.0, -0.4, 2.0})
        for (int n_g : {0, 1, 5, 40, 200, 1000}) {
            const auto rule = make_quadrature_rule(n_g, lambda);
            double s = 0.0;
            for (double w : rule.weights)
                s += w;
            EXPECT_NEAR(s, 1.0, 1e-13) << lambda << ' ' << n_g;
        }
}

TEST(PlainWeights, StableAtScale)
{
    const auto rule = make_quadrature_rule(1000, 0.0);
    double abs_sum = 0.0;
    for (double w : rule.weights) {
        EXPECT_TRUE(std::isfinite(w));
        abs_sum += std::abs(w);
    }
    EXPECT_LE(abs_sum, 1.0 + 1e-10);
}

TEST(PlainWeights, PolynomialExactnessRandom)
{
    for (double lambda : {0.0, 0.5, 1.0})
        for (int n_g = 0; n_g <= 50; n_g += 5) {
            const auto rule = make_quadrature_rule(n_g, lambda);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<double> c(static_cast<std::size_t>(n_g + 1));
                for (double& ck : c)
                    ck = oracle::uniform(-1.0, 1.0);
                double exact = 0.0;
                for (std::size_t k = 0; k < c.size(); ++k)
                    exact += c[k] / static_cast<double>(k + 1);
                const double approx = integrate_function(rule, [&](double y) {
                    double p = 0.0;
                    for (std::size_t k = c.size(); k-- > 0;)
                        p = p * y + c[k];
                    return p;
                });
                EXPECT_LE(std::abs(approx - exact), 1e-12 * (1.0 + std::abs(exact)))
                    << "lambda=" << lambda << " n_g=" << n_g;
            }
        }
}

TEST(IntegrateUnit, Constants)
{
    const auto rule = make_quadrature_rule(12, 0.2);
    const std::vector<double> samples(rule.size(), 3.5);
    EXPECT_NEAR(integrate_unit(rule, samples), 3.5, 1e-14);
}

TEST(IntegrateUnit, LinearExact)
{
    for (int n_g : {1, 2, 9, 300})
        EXPECT_NEAR(integrate_function(make_quadrature_rule(n_g, 0.7), [](double y) { return y; }), 0.5, 1e-14);
}

TEST(IntegrateUnit, ExponentialAgainstAdaptiveOracle)
{
    const auto rule = make_quadrature_rule(16, 0.0);
    const double reference = oracle::adaptive_simpson([](double y) { return std::exp(y); }, 0.0, 1.0, 1e-15);
    EXPECT_NEAR(integrate_function(rule, [](double y) { return std::exp(y); }), reference, 1e-12);
}

TEST(IntegrateUnit, LengthMismatch)
{
    const auto rule = make_quadrature_rule(4, 0.0);
    const std::vector<double> samples(3, 1.0);
    try {
        integrate_unit(rule, samples);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(QuadratureRule, RejectsNegativeCount)
{
    EXPECT_THROW(make_quadrature_rule(-1, 0.0), Error);
}
