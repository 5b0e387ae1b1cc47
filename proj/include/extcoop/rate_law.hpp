#pragma once

#include "extcoop/errors.hpp"
#include "extcoop/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <string>

namespace extcoop {

struct SaturationTerm {
    double a = 0.0;  ///< offset, >= 0
    double d = 0.0;  ///< exponent, >= 0
};

/**
 * Rate of a single reaction as a function of concentrations:
 *
 *     r = (k_f * prod_e c_e^m_e - k_b * prod_k c_k^n_k) / prod_e (a_e + c_e)^d_e
 *
 * Forward exponents and saturation terms range over reactants, backward
 * exponents over products. Keys are species indices of the owning network.
 */
struct RateLaw {
    double k_f = 0.0;
    double k_b = 0.0;
    std::map<std::size_t, double> fwd_exponents;
    std::map<std::size_t, double> bwd_exponents;
    std::map<std::size_t, SaturationTerm> denom;

    /// True when c_s enters the expression with a nonzero effective power.
    bool depends_on(std::size_t s) const {
        if (auto it = fwd_exponents.find(s); it != fwd_exponents.end() && it->second > 0.0 && k_f > 0.0)
            return true;
        if (auto it = bwd_exponents.find(s); it != bwd_exponents.end() && it->second > 0.0 && k_b > 0.0)
            return true;
        if (auto it = denom.find(s); it != denom.end() && it->second.d > 0.0) return true;
        return false;
    }
};

namespace detail {

inline double monomial(double coeff, const std::map<std::size_t, double>& exponents, const Vector& c) {
    if (coeff == 0.0) return 0.0;
    double value = coeff;
    for (const auto& [s, e] : exponents) value *= std::pow(c(static_cast<Eigen::Index>(s)), e);
    return value;
}

inline double monomial_derivative(double coeff, const std::map<std::size_t, double>& exponents,
                                  const Vector& c, std::size_t s) {
    auto it = exponents.find(s);
    if (coeff == 0.0 || it == exponents.end() || it->second == 0.0) return 0.0;
    const double cs = c(static_cast<Eigen::Index>(s));
    const double e = it->second;
    if (cs == 0.0 && e < 1.0)
        throw GradientSingular("derivative of c^" + std::to_string(e) + " is unbounded at c[" +
                               std::to_string(s) + "] = 0");
    double value = coeff * e * std::pow(cs, e - 1.0);
    for (const auto& [t, et] : exponents)
        if (t != s) value *= std::pow(c(static_cast<Eigen::Index>(t)), et);
    return value;
}

inline double denominator(const RateLaw& law, const Vector& c) {
    double value = 1.0;
    for (const auto& [s, term] : law.denom) value *= std::pow(term.a + c(static_cast<Eigen::Index>(s)), term.d);
    return value;
}

inline void require_nonnegative(const RateLaw& law, const Vector& c) {
    auto check = [&](std::size_t s) {
        if (static_cast<Eigen::Index>(s) >= c.size())
            throw IndexError("rate law references species " + std::to_string(s) + " outside concentration vector");
        if (!(c(static_cast<Eigen::Index>(s)) >= 0.0))
            throw NonphysicalState("negative concentration c[" + std::to_string(s) + "] = " +
                                   std::to_string(c(static_cast<Eigen::Index>(s))));
    };
    for (const auto& kv : law.fwd_exponents) check(kv.first);
    for (const auto& kv : law.bwd_exponents) check(kv.first);
    for (const auto& kv : law.denom) check(kv.first);
}

}  // namespace detail

inline double eval_rate(const RateLaw& law, const Vector& c) {
    detail::require_nonnegative(law, c);
    for (const auto& [s, term] : law.denom) {
        if (term.d > 0.0 && term.a + c(static_cast<Eigen::Index>(s)) == 0.0)
            throw DenominatorVanishes("saturation factor (a + c[" + std::to_string(s) + "])^d is zero");
    }
    const double num = detail::monomial(law.k_f, law.fwd_exponents, c) -
                       detail::monomial(law.k_b, law.bwd_exponents, c);
    return num / detail::denominator(law, c);
}

/// Analytic gradient dr/dc over all species; entries for species outside the law are exactly 0.
inline Vector rate_gradient(const RateLaw& law, const Vector& c) {
    detail::require_nonnegative(law, c);
    for (const auto& [s, term] : law.denom) {
        if (term.d > 0.0 && term.a + c(static_cast<Eigen::Index>(s)) == 0.0)
            throw GradientSingular("saturation factor (a + c[" + std::to_string(s) + "])^d vanishes");
    }
    const double fwd = detail::monomial(law.k_f, law.fwd_exponents, c);
    const double bwd = detail::monomial(law.k_b, law.bwd_exponents, c);
    const double den = detail::denominator(law, c);
    const double rate = (fwd - bwd) / den;

    Vector grad = Vector::Zero(c.size());
    auto accumulate = [&](std::size_t s) {
        const auto idx = static_cast<Eigen::Index>(s);
        double g = (detail::monomial_derivative(law.k_f, law.fwd_exponents, c, s) -
                    detail::monomial_derivative(law.k_b, law.bwd_exponents, c, s)) /
                   den;
        if (auto it = law.denom.find(s); it != law.denom.end() && it->second.d > 0.0)
            g -= rate * it->second.d / (it->second.a + c(idx));
        grad(idx) = g;
    };
    for (const auto& kv : law.fwd_exponents) accumulate(kv.first);
    for (const auto& kv : law.bwd_exponents) accumulate(kv.first);
    for (const auto& kv : law.denom) accumulate(kv.first);
    return grad;
}

}  // namespace extcoop
