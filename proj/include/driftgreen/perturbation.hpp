#pragma once

#include "driftgreen/diffusion.hpp"
#include "driftgreen/model.hpp"
#include "driftgreen/quadrature.hpp"
#include "driftgreen/rational.hpp"

#include <optional>

namespace driftgreen {

// Every d_* function returns the derivative with respect to alpha at alpha = 0.
//
// For Wright-Fisher sigma^2 and polynomial psi the Automatic route divides each integrand
// numerator by y(1 - y) exactly and integrates the quotient in rational arithmetic. All other
// inputs (or Route::Quadrature) evaluate the integrals numerically.

enum class Route { Automatic, Quadrature };

/// psi(x) = x^k or psi(x) = (1 - x)^k.
struct MonomialPsi {
    enum class Kind { XPowK, OneMinusXPowK };
    Kind kind = Kind::XPowK;
    unsigned k = 0;

    RationalPolynomial polynomial() const;
    FrequencyDependence psi() const { return FrequencyDependence::polynomial(polynomial()); }
};

/// Exact first-order quantities for Wright-Fisher with polynomial psi.
struct ExactFirstOrder {
    RationalPolynomial fixation;  ///< d P_x(T_1 < T_0) as a polynomial in x
    Rational time_unconditional;  ///< coefficient of x in d E_x[T] as x -> 0
    Rational time_cond_up;        ///< d E_x[T_1 | T_1 < T_0] at x = 0+
    Rational time_cond_down;      ///< coefficient of x in d E_x[T_0 | T_0 < T_1] as x -> 0
    RationalPolynomial spectrum;  ///< d f(x) as a polynomial in x
};

struct FirstOrderReport {
    double x = 0.0;
    double d_fixation = 0.0;
    double d_time_unconditional_per_x = 0.0;
    double d_time_cond_up_at_0 = 0.0;
    double d_time_cond_down_per_x = 0.0;
    double d_spectrum = 0.0;
    /// Present when the report came from the rational route.
    std::optional<ExactFirstOrder> exact;
};

/// 2 [x \int_0^1 (1-y) psi - \int_0^x (x-y) psi]. Independent of sigma^2.
double d_fixation(const FrequencyDependence& psi, double x, const QuadConfig& cfg = {},
                  Route route = Route::Automatic);
/// x (1 - x^{k+1}) / C(k+2, 2), or (1 - x)(1 - (1 - x)^{k+1}) / C(k+2, 2).
Rational d_fixation_monomial(const MonomialPsi& m, const Rational& x);

double d_time_unconditional(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                            const QuadConfig& cfg = {}, Route route = Route::Automatic);
double d_time_cond_up(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                      const QuadConfig& cfg = {}, Route route = Route::Automatic);
double d_time_cond_down(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                        const QuadConfig& cfg = {}, Route route = Route::Automatic);
double d_spectrum(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double x,
                  const QuadConfig& cfg = {}, Route route = Route::Automatic);

/// Integrand in y of the matching d_time_* quantity (None -> unconditional, Up, Down).
double d_green(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double y,
               Conditioning conditioning, const QuadConfig& cfg = {});

/// d mu*(x) = sigma^2(x) [psi(x) - 2 \int_0^x y psi(y) dy / x^2].
double d_conditioned_drift(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double x,
                           const QuadConfig& cfg = {});

/// Rational route; throws Divergence when an integrand numerator is not divisible by y(1 - y).
ExactFirstOrder wf_polynomial_exact(const RationalPolynomial& psi);

FirstOrderReport wf_polynomial_report(const RationalPolynomial& psi, double x);
FirstOrderReport wf_monomial_report(const MonomialPsi& m, double x);

/// Report for arbitrary psi and sigma^2 by quadrature.
FirstOrderReport quadrature_report(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                                   double x, const QuadConfig& cfg = {});

} // namespace driftgreen
