#pragma once

// High-precision real and complex numbers on top of MPFR. All values created
// while a WorkingPrecision guard is alive use its precision.

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <complex>
#include <string>

#include "vasym/exponent.hpp"
#include "vasym/scalar.hpp"

namespace vasym {

using Real = boost::multiprecision::mpfr_float;

inline unsigned bits_to_digits10(unsigned bits)
{
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// Sets the default MPFR precision for the lifetime of the guard.
class WorkingPrecision {
public:
    explicit WorkingPrecision(unsigned bits) : saved_(Real::default_precision()), bits_(bits)
    {
        Real::default_precision(bits_to_digits10(bits));
    }
    ~WorkingPrecision() { Real::default_precision(saved_); }
    WorkingPrecision(const WorkingPrecision&) = delete;
    WorkingPrecision& operator=(const WorkingPrecision&) = delete;

    unsigned bits() const noexcept { return bits_; }

private:
    unsigned saved_;
    unsigned bits_;
};

inline Real hp_pi()
{
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline Real to_hp(const Rational& q)
{
    Real r;
    mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
    return r;
}

struct HpComplex {
    Real re{0};
    Real im{0};

    HpComplex() = default;
    HpComplex(Real r) : re(std::move(r)), im(0) {}
    HpComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    /// e^{i*theta}
    static HpComplex expi(const Real& theta)
    {
        HpComplex z;
        mpfr_sin_cos(z.im.backend().data(), z.re.backend().data(), theta.backend().data(), MPFR_RNDN);
        return z;
    }

    HpComplex& operator+=(const HpComplex& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    HpComplex& operator-=(const HpComplex& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    HpComplex& operator*=(const Real& s)
    {
        re *= s;
        im *= s;
        return *this;
    }
    friend HpComplex operator+(HpComplex a, const HpComplex& b) { return a += b; }
    friend HpComplex operator-(HpComplex a, const HpComplex& b) { return a -= b; }
    friend HpComplex operator-(const HpComplex& a) { return {Real(-a.re), Real(-a.im)}; }
    friend HpComplex operator*(const HpComplex& a, const HpComplex& b)
    {
        return {Real(a.re * b.re - a.im * b.im), Real(a.re * b.im + a.im * b.re)};
    }
    friend HpComplex operator*(HpComplex a, const Real& s) { return a *= s; }
    friend HpComplex operator*(const Real& s, HpComplex a) { return a *= s; }
    friend HpComplex operator/(const HpComplex& a, const HpComplex& b)
    {
        Real n = b.re * b.re + b.im * b.im;
        return {Real((a.re * b.re + a.im * b.im) / n), Real((a.im * b.re - a.re * b.im) / n)};
    }

    HpComplex conj() const { return {re, Real(-im)}; }
    Real norm() const { return re * re + im * im; }
    Real abs() const
    {
        Real r;
        mpfr_hypot(r.backend().data(), re.backend().data(), im.backend().data(), MPFR_RNDN);
        return r;
    }
    bool is_zero() const { return re == 0 && im == 0; }

    std::complex<double> to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
};

/// log|z| as a double; -inf for zero. Safe for magnitudes outside double range.
inline double log_abs(const HpComplex& z)
{
    if (z.is_zero()) return -std::numeric_limits<double>::infinity();
    Real a = z.abs();
    Real l;
    mpfr_log(l.backend().data(), a.backend().data(), MPFR_RNDN);
    return l.convert_to<double>();
}

inline double log_abs(const Real& x)
{
    if (x == 0) return -std::numeric_limits<double>::infinity();
    Real a = boost::multiprecision::abs(x);
    Real l;
    mpfr_log(l.backend().data(), a.backend().data(), MPFR_RNDN);
    return l.convert_to<double>();
}

inline HpComplex to_hp(const ComplexRational& c) { return {to_hp(c.re()), to_hp(c.im())}; }

/// Numeric value of a Q(i)[pi] scalar (Horner in pi).
inline HpComplex to_hp(const Scalar& s)
{
    if (s.is_zero()) return {};
    Real pi = hp_pi();
    const auto& cs = s.coeffs();
    HpComplex acc = to_hp(cs.back());
    for (std::size_t k = cs.size() - 1; k-- > 0;) acc = acc * pi + to_hp(cs[k]);
    return acc;
}

template <class Tag>
Real to_hp(const PiQuadratic<Tag>& v)
{
    Real pi = hp_pi();
    return to_hp(v.rational_part()) + to_hp(v.pi_part()) * pi + to_hp(v.pi2_part()) * pi * pi;
}

/// Decimal scientific notation with a fixed number of significant digits.
inline std::string format_double(double v, int digits = 17)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", std::max(digits, 1) - 1, v);
    return buf;
}

inline std::string to_decimal(const Real& x, int significant_digits)
{
    return x.str(significant_digits, std::ios_base::scientific);
}

} // namespace vasym
