#pragma once

#include "driftgreen/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace driftgreen {

/// Dense univariate polynomial in the monomial basis, c[0] + c[1] y + ... .
/// T is double for floating evaluation or Rational for exact work.
template <class T>
class BasicPolynomial {
public:
    BasicPolynomial() = default;
    BasicPolynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }
    explicit BasicPolynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static BasicPolynomial monomial(std::size_t k, T scale = T(1))
    {
        std::vector<T> c(k + 1, T(0));
        c[k] = scale;
        return BasicPolynomial(std::move(c));
    }

    /// (1 - y)^k expanded.
    static BasicPolynomial one_minus_pow(std::size_t k)
    {
        BasicPolynomial p{T(1)};
        const BasicPolynomial one_minus{T(1), T(-1)};
        for (std::size_t i = 0; i < k; ++i)
            p = p * one_minus;
        return p;
    }

    const std::vector<T>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// Degree; the zero polynomial reports -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    T coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

    T operator()(const T& y) const
    {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * y + *it;
        return acc;
    }

    /// Antiderivative vanishing at 0.
    BasicPolynomial antiderivative() const
    {
        std::vector<T> out(c_.size() + 1, T(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            out[i + 1] = c_[i] / T(static_cast<long>(i + 1));
        return BasicPolynomial(std::move(out));
    }

    T integral(const T& a, const T& b) const
    {
        auto anti = antiderivative();
        return anti(b) - anti(a);
    }

    /// p(1 - y).
    BasicPolynomial reflected() const
    {
        BasicPolynomial out;
        const BasicPolynomial one_minus{T(1), T(-1)};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            out = out * one_minus + BasicPolynomial{*it};
        return out;
    }

    friend BasicPolynomial operator+(const BasicPolynomial& a, const BasicPolynomial& b)
    {
        std::vector<T> out(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            out[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i)
            out[i] += b.c_[i];
        return BasicPolynomial(std::move(out));
    }

    friend BasicPolynomial operator-(const BasicPolynomial& a) { return a * T(-1); }
    friend BasicPolynomial operator-(const BasicPolynomial& a, const BasicPolynomial& b) { return a + (-b); }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b)
    {
        if (a.c_.empty() || b.c_.empty())
            return {};
        std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] += a.c_[i] * b.c_[j];
        return BasicPolynomial(std::move(out));
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a, const T& s)
    {
        std::vector<T> out = a.c_;
        for (auto& v : out)
            v *= s;
        return BasicPolynomial(std::move(out));
    }
    friend BasicPolynomial operator*(const T& s, const BasicPolynomial& a) { return a * s; }

    friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division: returns {quotient, remainder}.
    friend std::pair<BasicPolynomial, BasicPolynomial> divmod(const BasicPolynomial& num,
                                                              const BasicPolynomial& den)
    {
        if (den.is_zero())
            throw std::invalid_argument("polynomial division by zero");
        std::vector<T> rem = num.c_;
        const int dd = den.degree();
        if (num.degree() < dd)
            return {BasicPolynomial{}, num};
        std::vector<T> quot(static_cast<std::size_t>(num.degree() - dd + 1), T(0));
        const T lead = den.c_.back();
        for (int k = num.degree() - dd; k >= 0; --k) {
            T q = rem[static_cast<std::size_t>(k + dd)] / lead;
            quot[static_cast<std::size_t>(k)] = q;
            for (int j = 0; j <= dd; ++j)
                rem[static_cast<std::size_t>(k + j)] -= q * den.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(dd));
        return {BasicPolynomial(std::move(quot)), BasicPolynomial(std::move(rem))};
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == T(0))
            c_.pop_back();
    }

    std::vector<T> c_;
};

using Polynomial = BasicPolynomial<double>;
using RationalPolynomial = BasicPolynomial<Rational>;

inline Polynomial to_double(const RationalPolynomial& p)
{
    std::vector<double> c;
    c.reserve(p.coefficients().size());
    for (const auto& q : p.coefficients())
        c.push_back(to_double(q));
    return Polynomial(std::move(c));
}

inline RationalPolynomial to_rational(const Polynomial& p)
{
    std::vector<Rational> c;
    c.reserve(p.coefficients().size());
    for (double v : p.coefficients())
        c.push_back(rational_from_double(v));
    return RationalPolynomial(std::move(c));
}

} // namespace driftgreen
