#pragma once

// Composite quadrature at MPFR precision.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "vasym/error.hpp"
#include "vasym/hp.hpp"

namespace vasym {

/// Nodes and weights on [-1, 1].
struct QuadratureRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
    unsigned bits = 0;

    std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// P_n(t) and P_n'(t) by the three-term recurrence.
inline std::pair<Real, Real> legendre(std::size_t n, const Real& t)
{
    Real p0 = 1, p1 = t;
    for (std::size_t k = 2; k <= n; ++k) {
        Real p2 = (Real(2 * k - 1) * t * p1 - Real(k - 1) * p0) / Real(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    Real dp = Real(n) * (t * p1 - p0) / (t * t - 1);
    return {p1, dp};
}

inline QuadratureRule make_gauss_legendre(std::size_t n, unsigned bits)
{
    WorkingPrecision wp(bits);
    QuadratureRule r;
    r.bits = bits;
    r.nodes.resize(n);
    r.weights.resize(n);
    Real eps = boost::multiprecision::ldexp(Real(1), -int(bits) + 4);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        Real t = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        Real dp;
        for (int it = 0; it < 100; ++it) {
            auto [p, d] = legendre(n, t);
            Real step = p / d;
            t -= step;
            dp = std::move(d);
            if (boost::multiprecision::abs(step) < eps) {
                dp = legendre(n, t).second;
                break;
            }
        }
        Real w = 2 / ((1 - t * t) * dp * dp);
        r.nodes[i] = t;
        r.nodes[n - 1 - i] = -t;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0;
    return r;
}

} // namespace detail

/// n-point Gauss–Legendre rule; cached per (n, bits).
inline const QuadratureRule& gauss_legendre(std::size_t n, unsigned bits)
{
    static std::mutex mu;
    static std::map<std::pair<std::size_t, unsigned>, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, bits}];
    if (!slot) slot = std::make_unique<QuadratureRule>(detail::make_gauss_legendre(n, bits));
    return *slot;
}

/// Clenshaw–Curtis rule on n + 1 Chebyshev points (n even).
inline QuadratureRule clenshaw_curtis(std::size_t n, unsigned bits)
{
    if (n < 2 || n % 2) throw Error(ErrorKind::DomainError, "Clenshaw-Curtis needs an even n >= 2");
    WorkingPrecision wp(bits);
    QuadratureRule r;
    r.bits = bits;
    Real pi = hp_pi();
    for (std::size_t k = 0; k <= n; ++k) {
        Real theta = pi * Real(k) / Real(n);
        Real s = 0;
        for (std::size_t j = 1; j <= n / 2; ++j) {
            Real b = 2 * j == n ? 1 : 2;
            s += b / Real(4 * j * j - 1) * boost::multiprecision::cos(Real(2 * j) * theta);
        }
        Real c = (k == 0 || k == n) ? 1 : 2;
        r.nodes.push_back(boost::multiprecision::cos(theta));
        r.weights.push_back(c / Real(n) * (1 - s));
    }
    return r;
}

/// Integral of g over [a, b] split into equal panels.
template <class G>
HpComplex integrate_panels(G&& g, const Real& a, const Real& b, std::size_t panels, const QuadratureRule& rule)
{
    Real h = (b - a) / Real(panels) / 2;
    HpComplex sum;
    for (std::size_t p = 0; p < panels; ++p) {
        Real mid = a + h * Real(2 * p + 1);
        HpComplex part;
        for (std::size_t i = 0; i < rule.size(); ++i) part += g(Real(mid + h * rule.nodes[i])) * rule.weights[i];
        sum += part;
    }
    return sum * h;
}

} // namespace vasym
