#include "driftgreen/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace driftgreen {

FrequencyDependence FrequencyDependence::polynomial(RationalPolynomial coeffs)
{
    FrequencyDependence f;
    f.approx_ = to_double(coeffs);
    double bound = 0.0;
    for (double c : f.approx_.coefficients())
        bound += std::fabs(c);
    f.bound_ = bound;
    f.exact_ = std::move(coeffs);
    return f;
}

FrequencyDependence FrequencyDependence::polynomial(const std::vector<double>& coeffs)
{
    for (double c : coeffs)
        if (!std::isfinite(c))
            throw std::invalid_argument("psi coefficients must be finite");
    return polynomial(to_rational(Polynomial(coeffs)));
}

FrequencyDependence FrequencyDependence::evaluator(std::function<double(double)> psi, double bound)
{
    if (!psi)
        throw std::invalid_argument("psi evaluator is empty");
    if (!std::isfinite(bound) || bound < 0.0)
        throw std::invalid_argument("psi bound must be finite and non-negative");
    FrequencyDependence f;
    f.eval_ = std::move(psi);
    f.bound_ = bound;
    return f;
}

double FrequencyDependence::operator()(double y) const
{
    return exact_ ? approx_(y) : eval_(y);
}

FrequencyDependence FrequencyDependence::mirrored() const
{
    if (exact_)
        return polynomial(-exact_->reflected());
    auto inner = eval_;
    return evaluator([inner](double y) { return -inner(1.0 - y); }, bound_);
}

FrequencyDependence FrequencyDependence::combined(double a, const FrequencyDependence& other, double b) const
{
    if (exact_ && other.exact_)
        return polynomial(*exact_ * rational_from_double(a) + *other.exact_ * rational_from_double(b));
    auto lhs = *this;
    auto rhs = other;
    return evaluator([lhs, rhs, a, b](double y) { return a * lhs(y) + b * rhs(y); },
                     std::fabs(a) * bound_ + std::fabs(b) * other.bound_);
}

DiffusionCoefficient DiffusionCoefficient::wright_fisher()
{
    DiffusionCoefficient d;
    d.kind_ = Kind::WrightFisher;
    d.poly_ = Polynomial{0.0, 1.0, -1.0};
    return d;
}

DiffusionCoefficient DiffusionCoefficient::polynomial(const std::vector<double>& coeffs)
{
    DiffusionCoefficient d;
    d.kind_ = Kind::Polynomial;
    d.poly_ = Polynomial(coeffs);
    constexpr int kGrid = 4096;
    for (int i = 1; i < kGrid; ++i) {
        const double y = static_cast<double>(i) / kGrid;
        const double v = d.poly_(y);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "sigma^2 must be positive on (0,1); sigma^2(" << y << ") = " << v;
            throw std::invalid_argument(msg.str());
        }
    }
    return d;
}

DiffusionCoefficient DiffusionCoefficient::evaluator(std::function<double(double)> sigma2)
{
    if (!sigma2)
        throw std::invalid_argument("sigma^2 evaluator is empty");
    DiffusionCoefficient d;
    d.kind_ = Kind::Evaluator;
    d.eval_ = std::move(sigma2);
    return d;
}

double DiffusionCoefficient::operator()(double y) const
{
    switch (kind_) {
    case Kind::WrightFisher:
        return y * (1.0 - y);
    case Kind::Polynomial:
        return poly_(y);
    case Kind::Evaluator:
        break;
    }
    return eval_(y);
}

std::optional<Polynomial> DiffusionCoefficient::polynomial_form() const
{
    if (kind_ == Kind::Evaluator)
        return std::nullopt;
    return poly_;
}

DiffusionCoefficient DiffusionCoefficient::mirrored() const
{
    switch (kind_) {
    case Kind::WrightFisher:
        return *this;
    case Kind::Polynomial: {
        DiffusionCoefficient d = *this;
        d.poly_ = poly_.reflected();
        return d;
    }
    case Kind::Evaluator:
        break;
    }
    auto inner = eval_;
    return evaluator([inner](double y) { return inner(1.0 - y); });
}

DiffusionModel::DiffusionModel(double alpha, FrequencyDependence psi, DiffusionCoefficient sigma2)
    : alpha_(alpha), psi_(std::move(psi)), sigma2_(std::move(sigma2))
{
    if (!std::isfinite(alpha_))
        throw std::invalid_argument("alpha must be finite");
}

} // namespace driftgreen
