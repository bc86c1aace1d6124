#include "doctest.h"

#include "driftgreen/diffusion.hpp"
#include "driftgreen/errors.hpp"
#include "driftgreen/perturbation.hpp"

#include <cmath>

using namespace driftgreen;

namespace {

FrequencyDependence poly(std::vector<double> c) { return FrequencyDependence::polynomial(c); }

const DiffusionCoefficient kWF = DiffusionCoefficient::wright_fisher();

RationalPolynomial rpoly(std::initializer_list<long> c)
{
    std::vector<Rational> v;
    for (long x : c)
        v.emplace_back(x);
    return RationalPolynomial(std::move(v));
}

// -4/((k+1)(k+2)) * sum_{i=2}^k 1/i
Rational hitting_time_closed_form(unsigned k)
{
    Rational h(0);
    for (unsigned i = 2; i <= k; ++i)
        h += Rational(1, i);
    return Rational(-4) / Rational((k + 1) * (k + 2)) * h;
}

} // namespace

TEST_SUITE("perturbation") {

TEST_CASE("fixation derivative examples")
{
    CHECK(d_fixation(poly({1}), 0.3) == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(d_fixation(poly({0, 1}), 0.5) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(d_fixation(poly({1, -2}), 0.2) == doctest::Approx(0.032).epsilon(1e-12));
    // The same integrals by brute-force quadrature.
    CHECK(d_fixation(poly({1, -2}), 0.2, {}, Route::Quadrature) == doctest::Approx(0.032).epsilon(1e-10));
    for (double x : {0.0, 1.0})
        CHECK(std::abs(d_fixation(poly({0.3, 2, -5}), x)) <= 1e-15);
}

TEST_CASE("closed-form monomial fixation derivative")
{
    using K = MonomialPsi::Kind;
    CHECK(d_fixation_monomial({K::XPowK, 0}, Rational(1, 2)) == Rational(1, 4));
    CHECK(d_fixation_monomial({K::XPowK, 2}, Rational(1, 2)) == Rational(7, 96));
    CHECK(d_fixation_monomial({K::OneMinusXPowK, 1}, Rational(1, 2)) == Rational(1, 8));
    for (unsigned k = 0; k <= 6; ++k) {
        for (K kind : {K::XPowK, K::OneMinusXPowK}) {
            const MonomialPsi m{kind, k};
            for (int i = 0; i <= 10; ++i) {
                const Rational x(i, 10);
                CHECK(std::abs(to_double(d_fixation_monomial(m, x)) - d_fixation(m.psi(), to_double(x))) <= 1e-12);
            }
        }
    }
}

TEST_CASE("unconditional time derivative examples")
{
    CHECK(d_time_unconditional(poly({1}), kWF) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(d_time_unconditional(poly({0, 1}), kWF)) <= 1e-14);
    CHECK(d_time_unconditional(poly({0, 0, 0, 1}), kWF) == doctest::Approx(-1.0 / 6).epsilon(1e-12));
    for (double gamma : {-2.0, 0.0, 0.5, 3.0})
        CHECK(d_time_unconditional(poly({1.5, -gamma}), kWF) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("conditioned time derivative examples")
{
    CHECK(std::abs(d_time_cond_up(poly({1}), kWF)) <= 1e-14);
    CHECK(d_time_cond_up(poly({0, 1}), kWF) == doctest::Approx(-1.0 / 9).epsilon(1e-12));
    CHECK(d_time_cond_up(poly({0.7, -2}), kWF) == doctest::Approx(2.0 / 9).epsilon(1e-12));
    CHECK(std::abs(d_time_cond_down(poly({1}), kWF)) <= 1e-14);
    CHECK(d_time_cond_down(poly({0, 1}), kWF) == doctest::Approx(-5.0 / 9).epsilon(1e-12));
    CHECK(d_time_cond_down(poly({0.7, -2}), kWF) == doctest::Approx(10.0 / 9).epsilon(1e-12));
}

TEST_CASE("spectrum derivative examples")
{
    for (double x : {0.1, 0.5, 0.9})
        CHECK(d_spectrum(poly({1}), kWF, x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d_spectrum(poly({0, 1}), kWF, 0.5)) <= 1e-14);
    CHECK(d_spectrum(poly({1, -1}), kWF, 0.25) == doctest::Approx(1 + 1.0 / 6).epsilon(1e-12));
}

TEST_CASE("green derivative examples")
{
    CHECK(d_green(poly({1}), kWF, 0.5, Conditioning::None) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d_green(poly({0, 1}), kWF, 0.5, Conditioning::Up) == doctest::Approx(-1.0 / 6).epsilon(1e-12));
    const double up_k0 = integrate([](double y) { return d_green(poly({1}), kWF, y, Conditioning::Up); }, 0, 1);
    CHECK(std::abs(up_k0) <= 1e-12);
}

TEST_CASE("integrating the green derivative reproduces the time derivatives")
{
    const std::vector<FrequencyDependence> psis = {poly({1}), poly({0, 1}), poly({0, 0, 1}), poly({1, -2}),
                                                   poly({0.2, 0, -1, 3})};
    const std::vector<DiffusionCoefficient> sigmas = {kWF, DiffusionCoefficient::polynomial({0, 1, -0.5})};
    QuadConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    for (const auto& s2 : sigmas) {
        for (const auto& psi : psis) {
            auto total = [&](Conditioning c) {
                return integrate([&](double y) { return d_green(psi, s2, y, c, tight); }, 0, 1, tight);
            };
            CHECK(std::abs(total(Conditioning::None) - d_time_unconditional(psi, s2)) <= 1e-8);
            CHECK(std::abs(total(Conditioning::Up) - d_time_cond_up(psi, s2)) <= 1e-8);
            CHECK(std::abs(total(Conditioning::Down) - d_time_cond_down(psi, s2)) <= 1e-8);
        }
    }
}

TEST_CASE("every derivative is linear in psi")
{
    const auto p1 = poly({0.3, -1, 2});
    const auto p2 = poly({-0.5, 0, 0, 1.5});
    const double a = 1.75, b = -0.4;
    const auto mix = p1.combined(a, p2, b);
    const auto s2 = DiffusionCoefficient::polynomial({0.05, 1, -1});
    for (Route r : {Route::Automatic, Route::Quadrature}) {
        for (const auto& sig : {kWF, s2}) {
            auto lin = [&](auto f) { CHECK(std::abs(f(mix) - (a * f(p1) + b * f(p2))) <= 1e-10); };
            lin([&](const FrequencyDependence& p) { return d_fixation(p, 0.37, {}, r); });
            lin([&](const FrequencyDependence& p) { return d_time_unconditional(p, sig, {}, r); });
            lin([&](const FrequencyDependence& p) { return d_time_cond_up(p, sig, {}, r); });
            lin([&](const FrequencyDependence& p) { return d_time_cond_down(p, sig, {}, r); });
            lin([&](const FrequencyDependence& p) { return d_spectrum(p, sig, 0.61, {}, r); });
            lin([&](const FrequencyDependence& p) { return d_green(p, sig, 0.44, Conditioning::Down); });
            lin([&](const FrequencyDependence& p) { return d_conditioned_drift(p, sig, 0.52); });
        }
    }
}

TEST_CASE("quadrature route agrees with the exact route")
{
    for (const auto& psi : {poly({1}), poly({0, 0, 1}), poly({2, -7, 3, 1})}) {
        CHECK(std::abs(d_time_unconditional(psi, kWF) - d_time_unconditional(psi, kWF, {}, Route::Quadrature)) <= 1e-9);
        CHECK(std::abs(d_time_cond_up(psi, kWF) - d_time_cond_up(psi, kWF, {}, Route::Quadrature)) <= 1e-9);
        CHECK(std::abs(d_time_cond_down(psi, kWF) - d_time_cond_down(psi, kWF, {}, Route::Quadrature)) <= 1e-9);
        CHECK(std::abs(d_spectrum(psi, kWF, 0.3) - d_spectrum(psi, kWF, 0.3, {}, Route::Quadrature)) <= 1e-9);
    }
    // Opaque psi can only take the quadrature route.
    const auto opaque = FrequencyDependence::evaluator([](double y) { return 2 - 7 * y + 3 * y * y + y * y * y; }, 10);
    const auto same = poly({2, -7, 3, 1});
    CHECK(std::abs(d_time_cond_down(opaque, kWF) - d_time_cond_down(same, kWF)) <= 1e-8);
    CHECK(std::abs(d_fixation(opaque, 0.4) - d_fixation(same, 0.4)) <= 1e-10);
}

TEST_CASE("monomial reports")
{
    using K = MonomialPsi::Kind;
    const FirstOrderReport r1 = wf_monomial_report({K::XPowK, 1}, 0.5);
    REQUIRE(r1.exact);
    CHECK(r1.exact->fixation == RationalPolynomial{Rational(0), Rational(1, 3), Rational(0), Rational(-1, 3)});
    CHECK(r1.exact->time_unconditional == 0);
    CHECK(r1.exact->time_cond_up == Rational(-1, 9));
    CHECK(r1.exact->time_cond_down == Rational(-5, 9));
    CHECK(r1.exact->spectrum == RationalPolynomial{Rational(-1, 3), Rational(2, 3)});
    CHECK(r1.d_fixation == doctest::Approx(0.125));

    const FirstOrderReport r0 = wf_monomial_report({K::XPowK, 0}, 0.5);
    CHECK(r0.exact->fixation == rpoly({0, 1, -1}));
    CHECK(r0.exact->time_unconditional == 2);
    CHECK(r0.exact->time_cond_up == 0);
    CHECK(r0.exact->time_cond_down == 0);
    CHECK(r0.exact->spectrum == rpoly({1}));

    const FirstOrderReport q0 = wf_monomial_report({K::OneMinusXPowK, 0}, 0.5);
    CHECK(q0.exact->fixation == r0.exact->fixation);
    CHECK(q0.exact->time_unconditional == r0.exact->time_unconditional);
    CHECK(q0.exact->time_cond_up == r0.exact->time_cond_up);
    CHECK(q0.exact->time_cond_down == r0.exact->time_cond_down);
    CHECK(q0.exact->spectrum == r0.exact->spectrum);
    CHECK(q0.d_spectrum == r0.d_spectrum);
}

TEST_CASE("mirror relation between x^k and (1-x)^k")
{
    // Reflection sends psi = (1-x)^k to -x^k, so the fixation derivative of (1-x)^k at x is
    // that of x^k at 1 - x.
    using K = MonomialPsi::Kind;
    for (unsigned k = 0; k <= 6; ++k) {
        const ExactFirstOrder a = wf_polynomial_exact(MonomialPsi{K::XPowK, k}.polynomial());
        const ExactFirstOrder b = wf_polynomial_exact(MonomialPsi{K::OneMinusXPowK, k}.polynomial());
        CHECK(b.fixation == a.fixation.reflected());
    }
}

TEST_CASE("exact rational spot values")
{
    using K = MonomialPsi::Kind;
    CHECK(wf_polynomial_exact(MonomialPsi{K::XPowK, 1}.polynomial()).time_cond_up == Rational(-1, 9));
    CHECK(wf_polynomial_exact(MonomialPsi{K::XPowK, 1}.polynomial()).time_cond_down == Rational(-5, 9));
    for (unsigned k = 2; k <= 10; ++k) {
        const Rational got = wf_polynomial_exact(MonomialPsi{K::XPowK, k}.polynomial()).time_unconditional;
        CHECK(got == hitting_time_closed_form(k));
    }
    CHECK(hitting_time_closed_form(3) == Rational(-1, 6));
}

TEST_CASE("non-integrable combinations raise Divergence")
{
    const auto s2 = DiffusionCoefficient::polynomial({0, 0, 1});
    CHECK_THROWS_AS(d_time_unconditional(poly({1}), s2), Divergence);
}

TEST_CASE("first-order formulas match finite differences of the exact solver")
{
    // Residual of [exact(alpha) - exact(0)] / alpha against the derivative should shrink with alpha.
    const std::vector<FrequencyDependence> psis = {poly({1}), poly({0, 1}), poly({0, 0, 1}), poly({1, -1})};
    const double x = 0.3;
    for (const auto& psi : psis) {
        auto residuals = [&](auto exact, double derivative) {
            const double r1 = std::abs((exact(1e-2) - exact(0.0)) / 1e-2 - derivative);
            const double r2 = std::abs((exact(1e-3) - exact(0.0)) / 1e-3 - derivative);
            CHECK(r2 <= 0.2 * r1 + 1e-6);
        };
        auto solver = [&](double a) { return DiffusionSolver(DiffusionModel(a, psi)); };
        residuals([&](double a) { return solver(a).hit_prob_up(x); }, d_fixation(psi, x));
        residuals([&](double a) { return solver(a).frequency_spectrum(x); }, d_spectrum(psi, kWF, x));
        residuals([&](double a) { return solver(a).absorption_time_up_from_zero(); }, d_time_cond_up(psi, kWF));
        residuals([&](double a) { return solver(a).conditioned_drift(x); }, d_conditioned_drift(psi, kWF, x));
    }
}

TEST_CASE("conditioned drift derivative for monomials")
{
    for (unsigned k = 0; k <= 4; ++k) {
        const auto psi = MonomialPsi{MonomialPsi::Kind::XPowK, k}.psi();
        for (double x : {0.2, 0.5, 0.8}) {
            const double expect = double(k) / (k + 2) * std::pow(x, k) * x * (1 - x);
            CHECK(d_conditioned_drift(psi, kWF, x) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

} // TEST_SUITE
