#include "driftgreen/games.hpp"

#include "driftgreen/errors.hpp"
#include "driftgreen/perturbation.hpp"

#include <sstream>

namespace driftgreen {

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

std::string format_polynomial(const RationalPolynomial& p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < p.coefficients().size(); ++i) {
        Rational c = p.coefficients()[i];
        if (c == 0)
            continue;
        if (!first)
            out << (c < 0 ? " - " : " + ");
        else if (c < 0)
            out << "-";
        if (c < 0)
            c = -c;
        if (i == 0 || c != 1)
            out << to_string(c);
        if (i > 0)
            out << (i == 0 || c != 1 ? "*" : "") << "x";
        if (i > 1)
            out << "^" << i;
        first = false;
    }
    return out.str();
}

} // namespace

RationalPolynomial DiploidCase::polynomial() const
{
    if (mode == DiploidMode::Dominant) {
        const RationalPolynomial u{q(1), q(-1)};
        return u * RationalPolynomial{beta} - RationalPolynomial::one_minus_pow(3) * gamma;
    }
    return RationalPolynomial{q(0), beta, q(0), -gamma};
}

LinearPsi haploid_psi(const PayoffMatrix& m)
{
    return {m.b - m.d, m.b - m.d + m.c - m.a};
}

DiploidCase diploid_case(const PayoffMatrix& m, DiploidMode mode)
{
    if (mode == DiploidMode::Dominant)
        return {mode, m.a - m.c, m.a - m.c + m.d - m.b};
    return {mode, m.b - m.d, m.b - m.d + m.c - m.a};
}

FrequencyDependence diploid_psi(const PayoffMatrix& m, DiploidMode mode)
{
    return diploid_case(m, mode).psi();
}

LinearPsi dominance_psi(const Rational& h)
{
    return {h, 2 * h - 1};
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Favored:
        return "FAVORED";
    case Verdict::Disfavored:
        return "DISFAVORED";
    case Verdict::Neutral:
        break;
    }
    return "NEUTRAL";
}

InvasionResult invasion_rule(const LinearPsi& p, double x)
{
    if (!(x >= 0.0 && x < 1.0))
        throw DomainError("invasion rule needs x in [0,1)");
    InvasionResult r;
    r.margin = p.beta - p.gamma * (1 + rational_from_double(x)) / 3;
    r.verdict = r.margin > 0 ? Verdict::Favored : (r.margin < 0 ? Verdict::Disfavored : Verdict::Neutral);
    return r;
}

DiploidCoefficients diploid_rule_coefficients(DiploidMode mode)
{
    const DiploidCase unit_beta{mode, q(1), q(0)};
    const DiploidCase unit_gamma{mode, q(0), q(1)};
    const ExactFirstOrder b = wf_polynomial_exact(unit_beta.polynomial());
    const ExactFirstOrder g = wf_polynomial_exact(unit_gamma.polynomial());

    DiploidCoefficients out;
    out.fixation = {b.fixation.coefficient(1), g.fixation.coefficient(1)};
    out.time = {b.time_unconditional, g.time_unconditional};
    out.time_up = {b.time_cond_up, g.time_cond_up};
    out.time_down = {b.time_cond_down, g.time_cond_down};
    out.spectrum = {b.spectrum, g.spectrum};
    return out;
}

DiploidCoefficients tabulated_diploid_coefficients(DiploidMode mode)
{
    DiploidCoefficients t;
    if (mode == DiploidMode::Dominant) {
        t.fixation = {q(2, 3), q(-2, 5)};
        t.time = {q(2), q(-5, 3)};
        t.time_up = {q(1, 9), q(-29, 300)};
        t.time_down = {q(5, 9), q(-77, 100)};
        t.spectrum = {RationalPolynomial{q(4, 3), q(-2, 3)},
                      RationalPolynomial{q(-8, 5), q(12, 5), q(-8, 5), q(2, 5)}};
    } else {
        t.fixation = {q(1, 3), q(-1, 10)};
        t.time = {q(0), q(1, 6)};
        t.time_up = {q(-1, 9), q(29, 300)};
        t.time_down = {q(-5, 9), q(27, 100)};
        t.spectrum = {RationalPolynomial{q(-1, 3), q(1, 600)},
                      RationalPolynomial{q(1, 10), q(1, 90), q(1, 10), q(-2, 5)}};
    }
    return t;
}

std::vector<ComparisonRow> diploid_comparison(DiploidMode mode)
{
    const DiploidCoefficients c = diploid_rule_coefficients(mode);
    const DiploidCoefficients t = tabulated_diploid_coefficients(mode);
    auto linear_row = [](const char* name, const LinearForm& a, const LinearForm& b) {
        return ComparisonRow{name, format_linear(a), format_linear(b), a == b};
    };
    return {
        linear_row("fixation", c.fixation, t.fixation),
        linear_row("time", c.time, t.time),
        linear_row("time_up", c.time_up, t.time_up),
        linear_row("time_down", c.time_down, t.time_down),
        ComparisonRow{"spectrum", format_polynomial_form(c.spectrum), format_polynomial_form(t.spectrum),
                      c.spectrum == t.spectrum},
    };
}

std::string format_linear(const LinearForm& f)
{
    std::ostringstream out;
    out << to_string(f.beta) << "*beta " << (f.gamma < 0 ? "- " : "+ ")
        << to_string(f.gamma < 0 ? Rational(-f.gamma) : f.gamma) << "*gamma";
    return out.str();
}

std::string format_polynomial_form(const PolynomialForm& f)
{
    return "beta*(" + format_polynomial(f.beta) + ") + gamma*(" + format_polynomial(f.gamma) + ")";
}

} // namespace driftgreen
