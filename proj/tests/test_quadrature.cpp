#include "doctest.h"

#include "driftgreen/errors.hpp"
#include "driftgreen/polynomial.hpp"
#include "driftgreen/quadrature.hpp"
#include "driftgreen/rational.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace driftgreen;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int degree)
{
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> c(degree + 1);
    for (auto& v : c)
        v = u(rng);
    return Polynomial(c);
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("polynomial, square-root singularity and divergent integrand")
{
    CHECK(integrate([](double y) { return 6 * y * (1 - y); }, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate([](double y) { return 1 / std::sqrt(y); }, 0, 1) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(integrate([](double y) { return 1 / y; }, 0, 1), Divergence);
    CHECK_THROWS_AS(integrate([](double y) { return 1 / (1 - y); }, 0, 1), Divergence);
}

TEST_CASE("singularity at the upper end")
{
    // y itself carries an absolute rounding error of ~1e-16 near 1, so a factor (1 - y)^-1/2
    // computed from y limits the attainable accuracy to roughly 1e-10.
    QuadConfig cfg;
    cfg.rel_tol = 1e-8;
    CHECK(integrate([](double y) { return 1 / std::sqrt(1 - y); }, 0, 1, cfg) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(integrate([](double y) { return 1 / std::sqrt(y * (1 - y)); }, 0.1, 1, cfg) ==
          doctest::Approx(std::numbers::pi / 2 - std::asin(2 * 0.1 - 1)).epsilon(1e-8));
}

TEST_CASE("reported error is consistent with the true error")
{
    const auto r = integrate_with_error([](double y) { return std::log(y); }, 0, 1);
    CHECK(std::abs(r.value + 1.0) <= std::max(1e-12, 1e-10));
    CHECK(r.error >= 0.0);
    CHECK(r.error <= 1e-9);
}

TEST_CASE("budget exhaustion is NonConvergence, not Divergence")
{
    QuadConfig cfg;
    cfg.rel_tol = 1e-15;
    cfg.abs_tol = 0.0;
    cfg.max_subdivisions = 2;
    auto kinked = [](double y) { return std::sqrt(std::abs(y - 0.318309886)) * std::sin(40 * y); };
    CHECK_THROWS_AS(integrate(kinked, 0, 1, cfg), NonConvergence);
}

TEST_CASE("config validation")
{
    QuadConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.rel_tol = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.abs_tol = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_subdivisions = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.endpoint_shave = 1e-2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    const QuadConfig t = QuadConfig{}.tightened(10);
    CHECK(t.rel_tol == doctest::Approx(1e-11));
    CHECK(t.abs_tol == doctest::Approx(1e-13));
}

TEST_CASE("linearity for polynomials up to degree 8")
{
    std::mt19937_64 rng(2024);
    const QuadConfig cfg;
    for (int deg = 0; deg <= 8; ++deg) {
        const Polynomial f = random_poly(rng, deg);
        const Polynomial g = random_poly(rng, 8 - deg);
        const double a = 1.7, b = -0.6;
        const double lhs = integrate([&](double y) { return a * f(y) + b * g(y); }, 0, 1, cfg);
        const double rhs = a * integrate([&](double y) { return f(y); }, 0, 1, cfg) +
                           b * integrate([&](double y) { return g(y); }, 0, 1, cfg);
        CHECK(std::abs(lhs - rhs) <= 10 * cfg.rel_tol * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("interval additivity")
{
    const QuadConfig cfg;
    const std::vector<Integrand> fs = {
        [](double y) { return std::exp(-3 * y) * (1 + y * y); },
        [](double y) { return (1 + y) / std::sqrt(y); },
        [](double y) { return std::log(y) * (1 - y); },
    };
    for (const auto& f : fs) {
        const double whole = integrate(f, 0, 1, cfg);
        for (double c : {0.1, 0.5, 0.9}) {
            const double parts = integrate(f, 0, c, cfg) + integrate(f, c, 1, cfg);
            CHECK(std::abs(parts - whole) <= 10 * cfg.rel_tol * std::max(1.0, std::abs(whole)));
        }
    }
}

TEST_CASE("quotients P/(y(1-y)) match exact rational integrals")
{
    // P = y (1 - y) Q, so the integrand equals Q but is evaluated through the division.
    const RationalPolynomial wf{Rational(0), Rational(1), Rational(-1)};
    const std::vector<RationalPolynomial> qs = {
        RationalPolynomial{Rational(1)},
        RationalPolynomial{Rational(2, 3), Rational(-5), Rational(7, 2)},
        RationalPolynomial{Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(1)},
        RationalPolynomial{Rational(-1, 7), Rational(3), Rational(0), Rational(-11, 4), Rational(1, 9)},
    };
    for (const auto& q : qs) {
        const Polynomial p = to_double(wf * q);
        const double got = integrate([&](double y) { return p(y) / (y * (1 - y)); }, 0, 1);
        const double exact = to_double(q.integral(Rational(0), Rational(1)));
        CHECK(std::abs(got - exact) <= 1e-10);
    }
}

TEST_CASE("cumulative table examples")
{
    const CumulativeTable id = cumulative([](double) { return 1.0; });
    for (double y : {0.0, 0.01, 0.3, 0.5, 0.77, 1.0})
        CHECK(id(y) == doctest::Approx(y).epsilon(1e-12));

    const CumulativeTable lin = cumulative([](double y) { return 1 - 2 * y; });
    CHECK(lin(0.5) == doctest::Approx(0.25).epsilon(1e-12));

    const CumulativeTable cube = cumulative([](double y) { return y * y * y; });
    CHECK(cube(1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(cube(0.0) == 0.0);
}

TEST_CASE("cumulative table structure")
{
    const CumulativeTable t = cumulative([](double y) { return std::cos(5 * y) + 2; });
    const auto& nodes = t.nodes();
    REQUIRE(nodes.size() >= 2);
    CHECK(nodes.front() == 0.0);
    CHECK(nodes.back() == 1.0);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        CHECK(nodes[i] > nodes[i - 1]);
    CHECK(t.values()[0] == 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        CHECK(t(nodes[i]) == t.values()[i]);
}

TEST_CASE("cumulative agrees with integrate, pointwise and in total")
{
    const QuadConfig cfg;
    auto f = [](double y) { return 1 / std::sqrt(y) + std::exp(y); };
    const CumulativeTable t = cumulative(f, cfg);
    const double whole = integrate(f, 0, 1, cfg);
    CHECK(std::abs(t(1.0) - whole) <= 10 * cfg.rel_tol * whole);
    CHECK(std::abs(t.total() - whole) <= 10 * cfg.rel_tol * whole);
    for (double y : {1e-8, 1e-4, 0.137, 0.5, 0.93, 1 - 1e-7}) {
        const double exact = 2 * std::sqrt(y) + std::exp(y) - 1;
        CHECK(std::abs(t(y) - exact) <= 1e-9 * std::max(1.0, exact));
        const double tail = (2 + std::exp(1.0) - 1) - exact;
        CHECK(std::abs(t.complement(y) - tail) <= 1e-9 * std::max(1e-3, tail));
    }
}

TEST_CASE("complement keeps relative accuracy near 1")
{
    const CumulativeTable t = cumulative([](double y) { return y; });
    const double y = 1 - 1e-9;
    const double exact = (1 - y * y) / 2;
    CHECK(t.complement(y) == doctest::Approx(exact).epsilon(1e-6));
}

} // TEST_SUITE
