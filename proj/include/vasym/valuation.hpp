#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "vasym/expr.hpp"

namespace vasym {

/// Extended exponent value: a finite ExponentValue or Infinity.
class Valuation {
public:
    Valuation() = default; // Infinity
    Valuation(ExponentValue v) : value_(std::move(v)) {}
    static Valuation infinity() { return {}; }

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }
    const ExponentValue& value() const
    {
        if (!value_) throw Error(ErrorKind::DomainError, "valuation is infinite");
        return *value_;
    }
    double to_double() const { return value_ ? value_->to_double() : std::numeric_limits<double>::infinity(); }
    /// Sign with Infinity counted as positive.
    int sign() const { return value_ ? value_->sign() : 1; }

    friend bool operator==(const Valuation& a, const Valuation& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b)
    {
        if (a.is_infinite() || b.is_infinite()) {
            if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
            return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return *a.value_ <=> *b.value_;
    }
    friend Valuation operator+(const Valuation& a, const Valuation& b)
    {
        if (a.is_infinite() || b.is_infinite()) return {};
        return Valuation(*a.value_ + *b.value_);
    }

private:
    std::optional<ExponentValue> value_;
};

inline std::string to_string(const Valuation& v) { return v.is_infinite() ? "inf" : to_string(v.value()); }

/// Minimum decay exponent over the monomial part; Infinity for null germs.
inline Valuation val(const Expr& a)
{
    if (a.is_null()) return Valuation::infinity();
    // terms() is ordered by rho first.
    return Valuation(a.terms().begin()->first.rho);
}

/// e^(-v(a-b)), 0 for a null difference.
inline double dist(const Expr& a, const Expr& b)
{
    Valuation v = val(a - b);
    if (v.is_infinite()) return 0.0;
    return std::exp(-v.to_double());
}

enum class VClass { Null, VInfinitesimal, VConstant, VFiniteOther, VInfinitelyLarge };

constexpr std::string_view to_string(VClass c) noexcept
{
    switch (c) {
    case VClass::Null: return "Null";
    case VClass::VInfinitesimal: return "VInfinitesimal";
    case VClass::VConstant: return "VConstant";
    case VClass::VFiniteOther: return "VFinite-other";
    case VClass::VInfinitelyLarge: return "VInfinitelyLarge";
    }
    return "?";
}

inline VClass classify(const Expr& a)
{
    Valuation v = val(a);
    if (v.is_infinite()) return VClass::Null;
    int s = v.value().sign();
    if (s > 0) return VClass::VInfinitesimal;
    if (s == 0) return VClass::VConstant;
    return VClass::VInfinitelyLarge;
}

} // namespace vasym
