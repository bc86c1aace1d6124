#include "driftgreen/perturbation.hpp"

#include "driftgreen/errors.hpp"

#include <cmath>
#include <sstream>
#include <variant>

namespace driftgreen {

namespace {

bool use_exact(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, Route route)
{
    return route == Route::Automatic && psi.is_polynomial() && sigma2.is_wright_fisher();
}

const RationalPolynomial kY{Rational(0), Rational(1)};
const RationalPolynomial kOneMinusY{Rational(1), Rational(-1)};
const RationalPolynomial kWrightFisher{Rational(0), Rational(1), Rational(-1)};

RationalPolynomial divide_by_wright_fisher(const RationalPolynomial& numerator, const char* what)
{
    auto [q, r] = divmod(numerator, kWrightFisher);
    if (!r.is_zero()) {
        std::ostringstream msg;
        msg << what << ": numerator is not divisible by y(1-y), so the integral does not exist";
        throw Divergence(msg.str());
    }
    return q;
}

// The running integrals every first-order formula is built from:
//   A(y) = \int_0^y (1-z) psi,  B(y) = \int_y^1 (1-z) psi,  Z(y) = \int_0^y z psi.
class Antiderivatives {
public:
    Antiderivatives(const FrequencyDependence& psi, const QuadConfig& cfg)
    {
        if (const auto* p = psi.exact()) {
            const RationalPolynomial a = (kOneMinusY * *p).antiderivative();
            const RationalPolynomial z = (kY * *p).antiderivative();
            const RationalPolynomial b = RationalPolynomial{a(Rational(1))} - a;
            // B is stored in powers of u = 1 - y so it stays relatively accurate as y -> 1.
            rep_ = Exact{to_double(a), to_double(b.reflected()), to_double(z)};
        } else {
            const QuadConfig inner = cfg.tightened(10.0);
            rep_ = Tables{cumulative([&psi](double y) { return (1.0 - y) * psi(y); }, inner),
                          cumulative([&psi](double y) { return y * psi(y); }, inner)};
        }
    }

    double a(double y) const
    {
        if (const auto* e = std::get_if<Exact>(&rep_))
            return e->a(y);
        return std::get<Tables>(rep_).a(y);
    }
    double b(double y) const
    {
        if (const auto* e = std::get_if<Exact>(&rep_))
            return e->b_reflected(1.0 - y);
        return std::get<Tables>(rep_).a.complement(y);
    }
    double z(double y) const
    {
        if (const auto* e = std::get_if<Exact>(&rep_))
            return e->z(y);
        return std::get<Tables>(rep_).z(y);
    }

private:
    struct Exact {
        Polynomial a;
        Polynomial b_reflected;
        Polynomial z;
    };
    struct Tables {
        CumulativeTable a;
        CumulativeTable z;
    };
    std::variant<Exact, Tables> rep_;
};

double positive_sigma2(const DiffusionCoefficient& sigma2, double y)
{
    const double s2 = sigma2(y);
    if (!(s2 > 0.0)) {
        std::ostringstream msg;
        msg << "sigma^2 is not positive at y = " << y;
        throw DomainError(msg.str());
    }
    return s2;
}

double green_bracket(const Antiderivatives& ad, double y, Conditioning conditioning)
{
    const double u = 1.0 - y;
    switch (conditioning) {
    case Conditioning::None:
        return u * ad.a(y) - y * ad.b(y);
    case Conditioning::Up:
        return u * u * ad.z(y) - y * y * ad.b(y);
    case Conditioning::Down:
        return u * u * (ad.a(y) - ad.z(y)) - 2.0 * y * u * ad.b(y);
    }
    return 0.0;
}

double quadrature_time(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                       Conditioning conditioning, const QuadConfig& cfg)
{
    const Antiderivatives ad(psi, cfg);
    auto integrand = [&](double y) {
        return 4.0 * green_bracket(ad, y, conditioning) / positive_sigma2(sigma2, y);
    };
    return integrate(integrand, 0.0, 1.0, cfg);
}

void require_closed_unit(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        std::ostringstream msg;
        msg << "x must lie in [0,1], got " << x;
        throw DomainError(msg.str());
    }
}

void require_open_unit(double x, const char* what)
{
    if (!(x > 0.0 && x < 1.0)) {
        std::ostringstream msg;
        msg << what << " must lie in (0,1), got " << x;
        throw DomainError(msg.str());
    }
}

Rational binomial_k2_2(unsigned k)
{
    return Rational(static_cast<long>(k + 2) * static_cast<long>(k + 1), 2);
}

Rational pow_rational(const Rational& base, unsigned n)
{
    Rational out(1);
    for (unsigned i = 0; i < n; ++i)
        out *= base;
    return out;
}

} // namespace

RationalPolynomial MonomialPsi::polynomial() const
{
    if (kind == Kind::XPowK)
        return RationalPolynomial::monomial(k);
    return RationalPolynomial::one_minus_pow(k);
}

ExactFirstOrder wf_polynomial_exact(const RationalPolynomial& psi)
{
    const RationalPolynomial a = (kOneMinusY * psi).antiderivative();
    const RationalPolynomial z = (kY * psi).antiderivative();
    const Rational a1 = a(Rational(1));
    const RationalPolynomial b = RationalPolynomial{a1} - a;
    const RationalPolynomial d = a - z;
    const RationalPolynomial u2 = kOneMinusY * kOneMinusY;

    ExactFirstOrder out;
    // 2 [x B(x) + (1 - x) Z(x)] equals 2 [x A(1) - \int_0^x (x-y) psi].
    out.fixation = (kY * b + kOneMinusY * z) * Rational(2);

    const RationalPolynomial none = kOneMinusY * a - kY * b;
    const RationalPolynomial up = u2 * z - kY * kY * b;
    const RationalPolynomial down = u2 * d - kY * kOneMinusY * b * Rational(2);

    const Rational zero(0), one(1);
    out.time_unconditional = Rational(4) * divide_by_wright_fisher(none, "unconditional time").integral(zero, one);
    out.time_cond_up = Rational(4) * divide_by_wright_fisher(up, "time conditioned on fixation").integral(zero, one);
    out.time_cond_down =
        Rational(4) * divide_by_wright_fisher(down, "time conditioned on loss").integral(zero, one);
    out.spectrum = divide_by_wright_fisher(none, "spectrum") * Rational(2);
    return out;
}

double d_fixation(const FrequencyDependence& psi, double x, const QuadConfig& cfg, Route route)
{
    require_closed_unit(x);
    if (route == Route::Automatic && psi.is_polynomial()) {
        const Antiderivatives ad(psi, cfg);
        return 2.0 * (x * ad.b(x) + (1.0 - x) * ad.z(x));
    }
    const double whole = integrate([&psi](double y) { return (1.0 - y) * psi(y); }, 0.0, 1.0, cfg);
    const double part = x > 0.0 ? integrate([&psi, x](double y) { return (x - y) * psi(y); }, 0.0, x, cfg) : 0.0;
    return 2.0 * (x * whole - part);
}

Rational d_fixation_monomial(const MonomialPsi& m, const Rational& x)
{
    if (x < 0 || x > 1)
        throw DomainError("x must lie in [0,1]");
    const Rational c = binomial_k2_2(m.k);
    if (m.kind == MonomialPsi::Kind::XPowK)
        return x * (Rational(1) - pow_rational(x, m.k + 1)) / c;
    const Rational u = Rational(1) - x;
    return u * (Rational(1) - pow_rational(u, m.k + 1)) / c;
}

double d_time_unconditional(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                            const QuadConfig& cfg, Route route)
{
    if (use_exact(psi, sigma2, route))
        return to_double(wf_polynomial_exact(*psi.exact()).time_unconditional);
    return quadrature_time(psi, sigma2, Conditioning::None, cfg);
}

double d_time_cond_up(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, const QuadConfig& cfg,
                      Route route)
{
    if (use_exact(psi, sigma2, route))
        return to_double(wf_polynomial_exact(*psi.exact()).time_cond_up);
    return quadrature_time(psi, sigma2, Conditioning::Up, cfg);
}

double d_time_cond_down(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2,
                        const QuadConfig& cfg, Route route)
{
    if (use_exact(psi, sigma2, route))
        return to_double(wf_polynomial_exact(*psi.exact()).time_cond_down);
    return quadrature_time(psi, sigma2, Conditioning::Down, cfg);
}

double d_spectrum(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double x,
                  const QuadConfig& cfg, Route route)
{
    require_open_unit(x, "x");
    if (use_exact(psi, sigma2, route))
        return to_double(wf_polynomial_exact(*psi.exact()).spectrum(rational_from_double(x)));
    const Antiderivatives ad(psi, cfg);
    return 2.0 * green_bracket(ad, x, Conditioning::None) / positive_sigma2(sigma2, x);
}

double d_green(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double y,
               Conditioning conditioning, const QuadConfig& cfg)
{
    require_open_unit(y, "y");
    const Antiderivatives ad(psi, cfg);
    return 4.0 * green_bracket(ad, y, conditioning) / positive_sigma2(sigma2, y);
}

double d_conditioned_drift(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double x,
                           const QuadConfig& cfg)
{
    if (x == 0.0)
        throw DomainError("conditioned drift is undefined at x = 0");
    require_open_unit(x, "x");
    double z_over_x2 = 0.0;
    if (const auto* p = psi.exact()) {
        // \int_0^x y psi has no terms below x^2, so divide coefficient-wise.
        const auto& c = (kY * *p).antiderivative().coefficients();
        std::vector<Rational> shifted(c.size() > 2 ? c.begin() + 2 : c.end(), c.end());
        z_over_x2 = to_double(RationalPolynomial(std::move(shifted)))(x);
    } else {
        z_over_x2 = integrate([&psi](double y) { return y * psi(y); }, 0.0, x, cfg) / (x * x);
    }
    return positive_sigma2(sigma2, x) * (psi(x) - 2.0 * z_over_x2);
}

FirstOrderReport wf_polynomial_report(const RationalPolynomial& psi, double x)
{
    require_closed_unit(x);
    FirstOrderReport r;
    r.x = x;
    r.exact = wf_polynomial_exact(psi);
    const Rational xq = rational_from_double(x);
    r.d_fixation = to_double(r.exact->fixation(xq));
    r.d_time_unconditional_per_x = to_double(r.exact->time_unconditional);
    r.d_time_cond_up_at_0 = to_double(r.exact->time_cond_up);
    r.d_time_cond_down_per_x = to_double(r.exact->time_cond_down);
    r.d_spectrum = to_double(r.exact->spectrum(xq));
    return r;
}

FirstOrderReport wf_monomial_report(const MonomialPsi& m, double x)
{
    return wf_polynomial_report(m.polynomial(), x);
}

FirstOrderReport quadrature_report(const FrequencyDependence& psi, const DiffusionCoefficient& sigma2, double x,
                                   const QuadConfig& cfg)
{
    require_open_unit(x, "x");
    FirstOrderReport r;
    r.x = x;
    r.d_fixation = d_fixation(psi, x, cfg, Route::Quadrature);
    r.d_time_unconditional_per_x = d_time_unconditional(psi, sigma2, cfg, Route::Quadrature);
    r.d_time_cond_up_at_0 = d_time_cond_up(psi, sigma2, cfg, Route::Quadrature);
    r.d_time_cond_down_per_x = d_time_cond_down(psi, sigma2, cfg, Route::Quadrature);
    r.d_spectrum = d_spectrum(psi, sigma2, x, cfg, Route::Quadrature);
    return r;
}

} // namespace driftgreen
