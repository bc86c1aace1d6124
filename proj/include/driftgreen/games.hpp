#pragma once

#include "driftgreen/model.hpp"
#include "driftgreen/polynomial.hpp"
#include "driftgreen/rational.hpp"

#include <string>
#include <vector>

namespace driftgreen {

/// 2x2 game: a = payoff(S1 vs S1), b = payoff(S1 vs S2), c = payoff(S2 vs S1), d = payoff(S2 vs S2).
struct PayoffMatrix {
    Rational a, b, c, d;
};

/// psi(x) = beta - gamma x.
struct LinearPsi {
    Rational beta, gamma;

    RationalPolynomial polynomial() const { return RationalPolynomial{beta, -gamma}; }
    FrequencyDependence psi() const { return FrequencyDependence::polynomial(polynomial()); }
};

enum class DiploidMode { Dominant, Recessive };

/// Dominant: psi(x) = (1 - x)(beta - gamma (1 - x)^2); recessive: psi(x) = x (beta - gamma x^2).
struct DiploidCase {
    DiploidMode mode = DiploidMode::Dominant;
    Rational beta, gamma;

    RationalPolynomial polynomial() const;
    FrequencyDependence psi() const { return FrequencyDependence::polynomial(polynomial()); }
};

/// beta = b - d, gamma = b - d + c - a.
LinearPsi haploid_psi(const PayoffMatrix& m);

/// Dominant: beta = a - c, gamma = a - c + d - b. Recessive: beta = b - d, gamma = b - d + c - a.
DiploidCase diploid_case(const PayoffMatrix& m, DiploidMode mode);
FrequencyDependence diploid_psi(const PayoffMatrix& m, DiploidMode mode);

/// psi(x) = h + x (1 - 2h), i.e. beta = h, gamma = 2h - 1.
LinearPsi dominance_psi(const Rational& h);

enum class Verdict { Favored, Disfavored, Neutral };
const char* to_string(Verdict v);

struct InvasionResult {
    Verdict verdict = Verdict::Neutral;
    Rational margin; ///< psi((1 + x) / 3), exact for the given double x
};

/// Weak selection raises the fixation probability above x iff psi((1 + x) / 3) > 0.
InvasionResult invasion_rule(const LinearPsi& p, double x);

/// c_beta * beta + c_gamma * gamma.
struct LinearForm {
    Rational beta, gamma;
    friend bool operator==(const LinearForm&, const LinearForm&) = default;
};

/// Polynomial in x for each of beta and gamma.
struct PolynomialForm {
    RationalPolynomial beta, gamma;
    friend bool operator==(const PolynomialForm&, const PolynomialForm&) = default;
};

/// First-order (in alpha) quantities of a diploid game as linear forms in (beta, gamma).
struct DiploidCoefficients {
    LinearForm fixation;        ///< coefficient of x in d P_x(T_1 < T_0), x -> 0
    LinearForm time;            ///< coefficient of x in d E_x[T], x -> 0
    LinearForm time_up;         ///< d E_{0+}[T_1 | T_1 < T_0]
    LinearForm time_down;       ///< coefficient of x in d E_x[T_0 | T_0 < T_1], x -> 0
    PolynomialForm spectrum;    ///< d f(x)
};

/// Computed from the diploid psi through the exact first-order formulas.
DiploidCoefficients diploid_rule_coefficients(DiploidMode mode);

/// Literature values the computed coefficients are compared against.
DiploidCoefficients tabulated_diploid_coefficients(DiploidMode mode);

struct ComparisonRow {
    std::string quantity;
    std::string computed;
    std::string tabulated;
    bool agrees = false;
};

std::vector<ComparisonRow> diploid_comparison(DiploidMode mode);

/// "2/3*beta - 2/5*gamma".
std::string format_linear(const LinearForm& f);
/// "beta*(4/3 - 2/3*x) + gamma*(...)".
std::string format_polynomial_form(const PolynomialForm& f);

} // namespace driftgreen
