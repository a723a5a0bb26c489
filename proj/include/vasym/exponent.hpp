#pragma once

// Exponents a + b*pi + c*pi^2 and angular frequencies a + b*pi with rational
// a, b, c. Equality is coefficient-wise; ordering is decided by evaluating pi
// on rational enclosures that are tightened until the sign is certain.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>

#include "vasym/error.hpp"
#include "vasym/scalar.hpp"

namespace vasym {

namespace detail {

inline constexpr std::string_view kPiFractionDigits =
    "14159265358979323846264338327950288419716939937510582097494459230781640628620899"
    "86280348253421170679821480865132823066470938446095505822317253594081284811174502"
    "84102701938521105559644622948954930381964428810975665933446128475648233786783165"
    "27120190914564856692346034861045432664821339360726024914127372458700660631558817"
    "48815209209628292540917153643678925903600113305305488204665213841469519415116094"
    "33057270365759591953092186117381932611793105118548074462379962749567351885752724"
    "89122793818301194912983367336244065664308602139494639522473719070217986094370277"
    "05392171762931767523846748184676694051320005681271452635608277857713427577896091"
    "73637178721468440901224953430146549585371050792279689258923542019956112129021960"
    "86403441815981362977477130996051870721134999999837297804995105973173281609631859"
    "50244594553469083026425223082533446850352619311881710100031378387528865875332083"
    "81420617177669147303598253490428755468731159562863882353787593751957781857780532"
    "1712268066130019278766111959092164201989";

/// Rational lower bound of pi using the first `digits` fractional digits.
inline Rational pi_lower_bound(std::size_t digits)
{
    Integer num(std::string("3") + std::string(kPiFractionDigits.substr(0, digits)));
    Integer den = 1;
    for (std::size_t i = 0; i < digits; ++i) den *= 10;
    return Rational(num, den);
}

struct RationalInterval {
    Rational lo;
    Rational hi;
};

inline RationalInterval scale(const Rational& k, const RationalInterval& x)
{
    if (k >= 0) return {Rational(k * x.lo), Rational(k * x.hi)};
    return {Rational(k * x.hi), Rational(k * x.lo)};
}

/// Sign of a + b*pi + c*pi^2, exact.
inline int pi_quadratic_sign(const Rational& a, const Rational& b, const Rational& c)
{
    if (b == 0 && c == 0) return sign(a);
    // Floating estimate with a generous rounding bound; rationals are
    // converted with relative error <= 2^-52.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double pi = 3.14159265358979323846;
    double ad = a.convert_to<double>(), bd = b.convert_to<double>(), cd = c.convert_to<double>();
    double approx = ad + bd * pi + cd * pi * pi;
    double bound = 16 * eps * (std::abs(ad) + 4 * std::abs(bd) + 12 * std::abs(cd));
    if (std::isfinite(approx) && std::isfinite(bound) && std::abs(approx) > bound) return approx > 0 ? 1 : -1;

    const std::size_t max_digits = kPiFractionDigits.size();
    for (std::size_t digits = 24;; digits = std::min(2 * digits, max_digits)) {
        Integer den = 1;
        for (std::size_t i = 0; i < digits; ++i) den *= 10;
        Rational lo = pi_lower_bound(digits);
        RationalInterval p{lo, Rational(lo + Rational(Integer(1), den))};
        RationalInterval p2{Rational(p.lo * p.lo), Rational(p.hi * p.hi)};
        RationalInterval tb = scale(b, p), tc = scale(c, p2);
        Rational vlo = a + tb.lo + tc.lo;
        Rational vhi = a + tb.hi + tc.hi;
        if (vlo > 0) return 1;
        if (vhi < 0) return -1;
        if (digits == max_digits) break;
    }
    throw Error(ErrorKind::DomainError, "could not resolve the sign of a pi-affine value");
}

} // namespace detail

/// Value a + b*pi + c*pi^2. `Tag` distinguishes exponents from frequencies.
template <class Tag>
class PiQuadratic {
public:
    PiQuadratic() = default;
    PiQuadratic(long a) : a_(a) {}
    PiQuadratic(Rational a, Rational b = 0, Rational c = 0) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c))
    {
        if (!Tag::allow_pi_squared && c_ != 0)
            throw Error(ErrorKind::Unsupported, "pi^2 component not allowed here");
    }

    const Rational& rational_part() const noexcept { return a_; }
    const Rational& pi_part() const noexcept { return b_; }
    const Rational& pi2_part() const noexcept { return c_; }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0; }
    bool is_rational() const { return b_ == 0 && c_ == 0; }
    int sign() const { return detail::pi_quadratic_sign(a_, b_, c_); }

    double to_double() const
    {
        const double pi = 3.14159265358979323846;
        return a_.convert_to<double>() + b_.convert_to<double>() * pi + c_.convert_to<double>() * pi * pi;
    }

    PiQuadratic& operator+=(const PiQuadratic& o)
    {
        a_ += o.a_;
        b_ += o.b_;
        c_ += o.c_;
        return *this;
    }
    PiQuadratic& operator-=(const PiQuadratic& o)
    {
        a_ -= o.a_;
        b_ -= o.b_;
        c_ -= o.c_;
        return *this;
    }
    friend PiQuadratic operator+(PiQuadratic x, const PiQuadratic& y) { return x += y; }
    friend PiQuadratic operator-(PiQuadratic x, const PiQuadratic& y) { return x -= y; }
    friend PiQuadratic operator-(const PiQuadratic& x) { return {Rational(-x.a_), Rational(-x.b_), Rational(-x.c_)}; }
    friend PiQuadratic operator*(const Rational& k, const PiQuadratic& x)
    {
        return {Rational(k * x.a_), Rational(k * x.b_), Rational(k * x.c_)};
    }

    friend bool operator==(const PiQuadratic& x, const PiQuadratic& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
    }
    friend std::strong_ordering operator<=>(const PiQuadratic& x, const PiQuadratic& y)
    {
        if (x.b_ == y.b_ && x.c_ == y.c_) {
            int s = x.a_.compare(y.a_);
            return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
        }
        int s = detail::pi_quadratic_sign(Rational(x.a_ - y.a_), Rational(x.b_ - y.b_), Rational(x.c_ - y.c_));
        return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    /// Scalar value as an element of Q[pi] (used when exponents appear as coefficients).
    Scalar as_scalar() const { return Scalar(std::vector<ComplexRational>{a_, b_, c_}); }

private:
    Rational a_{0};
    Rational b_{0};
    Rational c_{0};
};

struct ExponentTag {
    static constexpr bool allow_pi_squared = true;
};
struct FrequencyTag {
    static constexpr bool allow_pi_squared = false;
};

/// Dimensionless power of x; a monomial carries the factor x^(-rho).
using ExponentValue = PiQuadratic<ExponentTag>;
/// Angular frequency; a monomial carries the factor e^(i*freq*x).
using Frequency = PiQuadratic<FrequencyTag>;

/// Human-readable form, e.g. "1", "-3/2", "1 + pi^2", "2*pi".
template <class Tag>
std::string to_string(const PiQuadratic<Tag>& v)
{
    std::string out;
    auto piece = [&](const Rational& q, std::string_view sym) {
        if (q == 0) return;
        bool neg = q < 0;
        Rational mag = neg ? Rational(-q) : q;
        std::string body;
        if (sym.empty())
            body = mag.str();
        else if (mag == 1)
            body = std::string(sym);
        else
            body = mag.str() + "*" + std::string(sym);
        if (out.empty())
            out = neg ? "-" + body : body;
        else
            out += (neg ? " - " : " + ") + body;
    };
    piece(v.rational_part(), "");
    piece(v.pi_part(), "pi");
    piece(v.pi2_part(), "pi^2");
    return out.empty() ? "0" : out;
}

} // namespace vasym
