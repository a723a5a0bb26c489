#pragma once

// v-asymptotic series sum phi_n(x) / x^(r_n) in canonical form, exact
// expansion of canonical germs and residual checks.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vasym/vspace.hpp"

namespace vasym {

inline constexpr std::size_t kDefaultMaxTerms = 64;

struct SeriesTerm {
    ExponentValue r;
    Expr phi;

    friend bool operator==(const SeriesTerm& a, const SeriesTerm& b) { return a.r == b.r && a.phi == b.phi; }
};

class VAsymptoticSeries {
public:
    VAsymptoticSeries() = default;
    /// Throws InvariantViolation unless the terms are in canonical form.
    VAsymptoticSeries(std::vector<SeriesTerm> terms, bool diverges_to_infinity)
        : terms_(std::move(terms)), diverges_(diverges_to_infinity)
    {
        if (auto why = check(terms_)) throw Error(ErrorKind::InvariantViolation, *why);
    }

    /// Reason the terms fail canonical form, or nullopt. The exponents must
    /// strictly increase over the support, every nonzero coefficient must
    /// have valuation 0 and the coefficient sequence must be v-independent.
    static std::optional<std::string> check(const std::vector<SeriesTerm>& terms)
    {
        std::vector<Expr> support;
        const ExponentValue* last = nullptr;
        for (std::size_t n = 0; n < terms.size(); ++n) {
            const auto& t = terms[n];
            if (t.phi.is_zero()) continue;
            if (last && !(*last < t.r))
                return "exponents not strictly increasing at index " + std::to_string(n);
            last = &t.r;
            Valuation v = val(t.phi);
            if (v.is_infinite() || !v.value().is_zero())
                return "coefficient " + std::to_string(n) + " has valuation " + to_string(v) + ", expected 0";
            support.push_back(t.phi);
        }
        if (!is_v_independent(support)) return "coefficients are not linearly v-independent";
        return std::nullopt;
    }

    const std::vector<SeriesTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    const SeriesTerm& operator[](std::size_t n) const { return terms_.at(n); }
    bool diverges_to_infinity() const noexcept { return diverges_; }

    /// Indices with nonzero coefficient.
    std::vector<std::size_t> support() const
    {
        std::vector<std::size_t> s;
        for (std::size_t n = 0; n < terms_.size(); ++n)
            if (!terms_[n].phi.is_zero()) s.push_back(n);
        return s;
    }
    /// Exponents r_n over the support.
    std::vector<ExponentValue> exponents() const
    {
        std::vector<ExponentValue> e;
        for (auto n : support()) e.push_back(terms_[n].r);
        return e;
    }
    /// Coefficients phi_n over the support.
    std::vector<Expr> coefficients() const
    {
        std::vector<Expr> c;
        for (auto n : support()) c.push_back(terms_[n].phi);
        return c;
    }

    friend bool operator==(const VAsymptoticSeries& a, const VAsymptoticSeries& b)
    {
        return a.terms_ == b.terms_ && a.diverges_ == b.diverges_;
    }

private:
    std::vector<SeriesTerm> terms_;
    bool diverges_ = false;
};

/// Expansion by the recursion r_n = v(R_n), phi_n = st(x^(r_n) R_n),
/// R_(n+1) = R_n - phi_n / x^(r_n). Stops when the residual is null.
inline VAsymptoticSeries expand(const Expr& f, std::size_t max_terms = kDefaultMaxTerms)
{
    std::vector<SeriesTerm> terms;
    Expr residual = f;
    while (terms.size() < max_terms) {
        Valuation v = val(residual);
        if (v.is_infinite()) break;
        ExponentValue r = v.value();
        Expr phi = pseudo_st(scale_by_power(residual, -r)).phi;
        residual -= scale_by_power(phi, r);
        terms.push_back({std::move(r), std::move(phi)});
    }
    return VAsymptoticSeries(std::move(terms), val(residual).is_infinite());
}

/// sum_{k <= n} phi_k / x^(r_k)
inline Expr partial_sum(const VAsymptoticSeries& s, std::size_t n)
{
    if (n >= s.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "index " + std::to_string(n) + " out of range for a series of length " + std::to_string(s.size()));
    Expr sum;
    for (std::size_t k = 0; k <= n; ++k) sum += scale_by_power(s[k].phi, s[k].r);
    return sum;
}

/// Per-index outcome of the three equivalent characterizations of
/// f ~ sum phi_n / x^(r_n).
struct VerifyRow {
    std::size_t n;
    ExponentValue r;
    /// v(x^(r_n) [f - S_n]), must be > 0
    Valuation after;
    /// v(x^(r_n) [f - S_(n-1)]), must be 0
    Valuation before;
    bool little_o = false;    ///< x^(r_n) [f - S_n] -> 0
    bool infinitesimal = false;
    bool v_constant = false;
    bool ok() const noexcept { return infinitesimal && v_constant; }
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool passed = true;
    std::optional<std::size_t> first_failure;
    /// f minus the full partial sum is null.
    bool complete = false;
};

namespace detail {

/// g -> 0 as x -> infinity, for canonical g.
inline bool tends_to_zero(const Expr& g)
{
    auto less = [](const std::vector<int>& a, const std::vector<int>& b) {
        for (std::size_t j = 0; j < std::max(a.size(), b.size()); ++j) {
            int pa = j < a.size() ? a[j] : 0;
            int pb = j < b.size() ? b[j] : 0;
            if (pa != pb) return pa < pb;
        }
        return false;
    };
    // Among rho = 0 terms the lexicographically largest log vector dominates.
    const std::vector<int>* top = nullptr;
    for (const auto& [k, c] : g.terms()) {
        int s = k.rho.sign();
        if (s < 0) return false;
        if (s == 0 && (!top || less(*top, k.logs))) top = &k.logs;
    }
    if (!top) return true;
    for (int p : *top)
        if (p != 0) return p < 0;
    return false;
}

} // namespace detail

inline VerifyReport verify_expansion(const Expr& f, const VAsymptoticSeries& s)
{
    VerifyReport rep;
    Expr before_sum;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const auto& t = s[n];
        Expr after_sum = before_sum + scale_by_power(t.phi, t.r);
        if (!t.phi.is_zero()) {
            Expr after = scale_by_power(f - after_sum, -t.r);
            Expr before = scale_by_power(f - before_sum, -t.r);
            VerifyRow row{n, t.r, val(after), val(before)};
            row.little_o = detail::tends_to_zero(after);
            row.infinitesimal = row.after.sign() > 0;
            row.v_constant = row.before.is_finite() && row.before.value().is_zero();
            if (!row.ok() && !rep.first_failure) rep.first_failure = n;
            rep.passed = rep.passed && row.ok();
            rep.rows.push_back(std::move(row));
        }
        before_sum = std::move(after_sum);
    }
    rep.complete = val(f - before_sum).is_infinite();
    return rep;
}

/// d_v(f, S_n) for every n.
inline std::vector<double> dv_convergence(const Expr& f, const VAsymptoticSeries& s)
{
    std::vector<double> d;
    d.reserve(s.size());
    Expr sum;
    for (std::size_t n = 0; n < s.size(); ++n) {
        sum += scale_by_power(s[n].phi, s[n].r);
        d.push_back(dist(f, sum));
    }
    return d;
}

} // namespace vasym
