#pragma once

#include "driftgreen/polynomial.hpp"
#include "driftgreen/rational.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace driftgreen {

/// The frequency-dependent selection function psi on [0, 1].
///
/// Either a polynomial (kept exactly, with a double copy for evaluation) or an opaque
/// evaluator together with a bound M >= sup |psi|.
class FrequencyDependence {
public:
    static FrequencyDependence polynomial(RationalPolynomial coeffs);
    /// Coefficients are converted exactly (every double is a dyadic rational).
    static FrequencyDependence polynomial(const std::vector<double>& coeffs);
    static FrequencyDependence constant(double value) { return polynomial(std::vector<double>{value}); }
    static FrequencyDependence evaluator(std::function<double(double)> psi, double bound);

    double operator()(double y) const;

    bool is_polynomial() const { return exact_.has_value(); }
    /// Exact coefficients; nullptr for opaque evaluators.
    const RationalPolynomial* exact() const { return exact_ ? &*exact_ : nullptr; }
    /// Double coefficients; nullptr for opaque evaluators.
    const Polynomial* coefficients() const { return exact_ ? &approx_ : nullptr; }
    double bound() const { return bound_; }

    /// Psi of the reflected process Y = 1 - X, i.e. y -> -psi(1 - y).
    FrequencyDependence mirrored() const;

    /// a * this + b * other; stays polynomial when both are.
    FrequencyDependence combined(double a, const FrequencyDependence& other, double b) const;

private:
    FrequencyDependence() = default;

    std::optional<RationalPolynomial> exact_;
    Polynomial approx_;
    std::function<double(double)> eval_;
    double bound_ = 0.0;
};

/// The variance coefficient sigma^2 on [0, 1].
class DiffusionCoefficient {
public:
    enum class Kind { WrightFisher, Polynomial, Evaluator };

    /// sigma^2(y) = y (1 - y).
    static DiffusionCoefficient wright_fisher();
    /// Must be strictly positive on (0, 1); checked on a fine grid.
    static DiffusionCoefficient polynomial(const std::vector<double>& coeffs);
    static DiffusionCoefficient evaluator(std::function<double(double)> sigma2);

    double operator()(double y) const;

    Kind kind() const { return kind_; }
    bool is_wright_fisher() const { return kind_ == Kind::WrightFisher; }
    /// Monomial coefficients when sigma^2 is polynomial (Wright-Fisher gives {0, 1, -1}).
    std::optional<Polynomial> polynomial_form() const;

    /// y -> sigma^2(1 - y).
    DiffusionCoefficient mirrored() const;

private:
    DiffusionCoefficient() = default;

    Kind kind_ = Kind::WrightFisher;
    Polynomial poly_;
    std::function<double(double)> eval_;
};

/// dX = alpha psi(X) sigma^2(X) dt + sigma(X) dW on [0, 1], absorbed at 0 and 1.
class DiffusionModel {
public:
    DiffusionModel(double alpha, FrequencyDependence psi,
                   DiffusionCoefficient sigma2 = DiffusionCoefficient::wright_fisher());

    double alpha() const { return alpha_; }
    const FrequencyDependence& psi() const { return psi_; }
    const DiffusionCoefficient& sigma2() const { return sigma2_; }

    /// mu(y) = psi(y) sigma^2(y); the drift is alpha * mu.
    double mu(double y) const { return psi_(y) * sigma2_(y); }
    bool is_neutral() const { return alpha_ == 0.0; }

    DiffusionModel with_alpha(double alpha) const { return {alpha, psi_, sigma2_}; }
    /// Law of 1 - X: psi -> -psi(1 - y), sigma^2 -> sigma^2(1 - y).
    DiffusionModel mirrored() const { return {alpha_, psi_.mirrored(), sigma2_.mirrored()}; }

private:
    double alpha_;
    FrequencyDependence psi_;
    DiffusionCoefficient sigma2_;
};

} // namespace driftgreen
