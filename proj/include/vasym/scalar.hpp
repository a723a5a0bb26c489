#pragma once

// Exact scalars: rationals, Gaussian rationals and polynomials in pi with
// Gaussian-rational coefficients. Because pi is transcendental, Q(i)[pi] is
// an integral domain with decidable equality, and its fraction field is
// isomorphic to Q(i)(t) for an indeterminate t.

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vasym/error.hpp"

namespace vasym {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline int sign(const Rational& q) { return q.sign(); }

namespace detail {

/// Decimal digit string to an integer (boost would read a leading 0 as octal).
inline Integer parse_digits(const std::string& d)
{
    if (d.empty() || d.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::Syntax, "malformed number '" + d + "'");
    Integer z;
    mpz_set_str(z.backend().data(), d.c_str(), 10);
    return z;
}

} // namespace detail

/// Parses "p", "-p", "p/q" or a finite decimal such as "0.125".
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    bool neg = !s.empty() && s[0] == '-';
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.erase(0, 1);
    if (s.empty()) throw Error(ErrorKind::Syntax, "empty rational literal");
    Rational q;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Integer den = detail::parse_digits(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorKind::Syntax, "zero denominator in '" + std::string(text) + "'");
        q = Rational(detail::parse_digits(s.substr(0, slash)), den);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string intpart = s.substr(0, dot), frac = s.substr(dot + 1);
        if (intpart.empty() && frac.empty()) throw Error(ErrorKind::Syntax, "malformed number '" + std::string(text) + "'");
        Integer den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        q = Rational(detail::parse_digits(intpart.empty() ? "0" : intpart) * den
                         + (frac.empty() ? Integer(0) : detail::parse_digits(frac)),
                     den);
    } else {
        q = Rational(detail::parse_digits(s));
    }
    return neg ? Rational(-q) : q;
}

inline std::string to_string(const Rational& q) { return q.str(); }

class ComplexRational {
public:
    ComplexRational() = default;
    ComplexRational(Rational re) : re_(std::move(re)) {}
    ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    ComplexRational(long v) : re_(v) {}

    static ComplexRational i() { return {Rational(0), Rational(1)}; }

    const Rational& re() const noexcept { return re_; }
    const Rational& im() const noexcept { return im_; }
    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    ComplexRational conj() const { return {re_, Rational(-im_)}; }
    Rational norm() const { return Rational(re_ * re_ + im_ * im_); }

    ComplexRational& operator+=(const ComplexRational& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {Rational(-a.re_), Rational(-a.im_)}; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b)
    {
        return {Rational(a.re_ * b.re_ - a.im_ * b.im_), Rational(a.re_ * b.im_ + a.im_ * b.re_)};
    }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b)
    {
        if (b.is_zero()) throw Error(ErrorKind::DomainError, "division by zero");
        Rational n = b.norm();
        ComplexRational p = a * b.conj();
        return {Rational(p.re_ / n), Rational(p.im_ / n)};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

private:
    Rational re_{0};
    Rational im_{0};
};

/// Element of Q(i)[pi]: sum of c_k * pi^k with Gaussian-rational c_k.
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : Scalar(ComplexRational(v)) {}
    Scalar(const Rational& q) : Scalar(ComplexRational(q)) {}
    Scalar(const ComplexRational& c)
    {
        if (!c.is_zero()) coeffs_.push_back(c);
    }
    explicit Scalar(std::vector<ComplexRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Scalar pi() { return Scalar(std::vector<ComplexRational>{ComplexRational(0), ComplexRational(1)}); }
    static Scalar i() { return Scalar(ComplexRational::i()); }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for zero.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<ComplexRational>& coeffs() const noexcept { return coeffs_; }
    ComplexRational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : ComplexRational(); }
    const ComplexRational& leading() const { return coeffs_.back(); }

    /// Units of Q(i)[pi] are the nonzero Gaussian rationals.
    bool is_unit() const noexcept { return coeffs_.size() == 1; }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    bool is_real() const
    {
        for (const auto& c : coeffs_)
            if (!c.is_real()) return false;
        return true;
    }
    bool is_rational() const { return is_constant() && is_real(); }
    Rational as_rational() const { return is_zero() ? Rational(0) : coeffs_[0].re(); }

    Scalar conj() const
    {
        std::vector<ComplexRational> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(c.conj());
        return Scalar(std::move(out));
    }

    Scalar inverse() const
    {
        if (!is_unit()) throw Error(ErrorKind::NonInvertibleDivisor, "scalar is not a unit of Q(i)[pi]");
        return Scalar(ComplexRational(1) / coeffs_[0]);
    }

    Scalar& operator+=(const Scalar& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    Scalar& operator-=(const Scalar& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator-(const Scalar& a)
    {
        std::vector<ComplexRational> out;
        out.reserve(a.coeffs_.size());
        for (const auto& c : a.coeffs_) out.push_back(-c);
        return Scalar(std::move(out));
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<ComplexRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Scalar(std::move(out));
    }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.coeffs_ == b.coeffs_; }

    /// Polynomial division with remainder over the field Q(i).
    static std::pair<Scalar, Scalar> divmod(const Scalar& a, const Scalar& b)
    {
        if (b.is_zero()) throw Error(ErrorKind::DomainError, "polynomial division by zero");
        std::vector<ComplexRational> rem = a.coeffs_;
        int db = b.degree();
        std::vector<ComplexRational> quot(rem.size() >= b.coeffs_.size() ? rem.size() - b.coeffs_.size() + 1 : 0);
        for (int k = static_cast<int>(rem.size()) - 1; k >= db; --k) {
            if (rem[k].is_zero()) continue;
            ComplexRational f = rem[k] / b.leading();
            quot[k - db] = f;
            for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.coeffs_[j];
        }
        return {Scalar(std::move(quot)), Scalar(std::move(rem))};
    }

    Scalar monic() const { return is_zero() ? Scalar() : *this * Scalar(ComplexRational(1) / leading()); }

    static Scalar gcd(Scalar a, Scalar b)
    {
        while (!b.is_zero()) {
            Scalar r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<ComplexRational> coeffs_;
};

inline Scalar pow(const Scalar& s, unsigned n)
{
    Scalar r(1L), base = s;
    while (n) {
        if (n & 1u) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

/// Element of the fraction field Q(i)(pi), kept reduced with a monic denominator.
class PiRational {
public:
    PiRational() : den_(1L) {}
    PiRational(Scalar num) : num_(std::move(num)), den_(1L) {}
    PiRational(Scalar num, Scalar den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const Scalar& num() const noexcept { return num_; }
    const Scalar& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    friend PiRational operator+(const PiRational& a, const PiRational& b)
    {
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }
    friend PiRational operator-(const PiRational& a, const PiRational& b)
    {
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }
    friend PiRational operator-(const PiRational& a) { return {-a.num_, a.den_}; }
    friend PiRational operator*(const PiRational& a, const PiRational& b)
    {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }
    friend PiRational operator/(const PiRational& a, const PiRational& b)
    {
        if (b.is_zero()) throw Error(ErrorKind::DomainError, "division by zero in Q(i)(pi)");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }
    friend bool operator==(const PiRational& a, const PiRational& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void normalize()
    {
        if (den_.is_zero()) throw Error(ErrorKind::DomainError, "zero denominator");
        if (num_.is_zero()) {
            den_ = Scalar(1L);
            return;
        }
        Scalar g = Scalar::gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = Scalar::divmod(num_, g).first;
            den_ = Scalar::divmod(den_, g).first;
        }
        Scalar lead(ComplexRational(1) / den_.leading());
        num_ *= lead;
        den_ *= lead;
    }

    Scalar num_;
    Scalar den_;
};

} // namespace vasym
