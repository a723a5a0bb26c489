#pragma once

// Generalized numbers: moderate germs modulo null germs, with the valuation,
// ultrametric and expansions inherited from representatives.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "vasym/estimator.hpp"
#include "vasym/series.hpp"

namespace vasym {

/// Class of an Expr modulo null germs. The representative has no null part,
/// so equality of classes is equality of representatives.
class GeneralizedNumber {
public:
    GeneralizedNumber() = default;
    explicit GeneralizedNumber(const Expr& f) : rep_(f.moderate_part()) {}

    const Expr& rep() const noexcept { return rep_; }
    bool is_zero() const noexcept { return rep_.is_zero(); }

    GeneralizedNumber& operator+=(const GeneralizedNumber& o)
    {
        rep_ += o.rep_;
        return *this;
    }
    GeneralizedNumber& operator-=(const GeneralizedNumber& o)
    {
        rep_ -= o.rep_;
        return *this;
    }
    GeneralizedNumber& operator*=(const GeneralizedNumber& o)
    {
        rep_ = rep_ * o.rep_;
        return *this;
    }
    friend GeneralizedNumber operator+(GeneralizedNumber a, const GeneralizedNumber& b) { return a += b; }
    friend GeneralizedNumber operator-(GeneralizedNumber a, const GeneralizedNumber& b) { return a -= b; }
    friend GeneralizedNumber operator*(GeneralizedNumber a, const GeneralizedNumber& b) { return a *= b; }
    friend GeneralizedNumber operator-(const GeneralizedNumber& a) { return GeneralizedNumber(-a.rep_); }
    friend GeneralizedNumber operator*(const Scalar& s, const GeneralizedNumber& a) { return GeneralizedNumber(a.rep_ * s); }

    friend bool operator==(const GeneralizedNumber& a, const GeneralizedNumber& b) { return a.rep_ == b.rep_; }

private:
    Expr rep_;
};

inline GeneralizedNumber quotient(const Expr& f) { return GeneralizedNumber(f); }

/// The scale: class of the identity germ x.
inline GeneralizedNumber gn_lambda() { return quotient(Expr::x_power(ExponentValue(-1))); }

/// lambda^s, i.e. the class of x^s.
inline GeneralizedNumber gn_lambda_power(const ExponentValue& s) { return quotient(Expr::x_power(-s)); }

inline Valuation gn_val(const GeneralizedNumber& a) { return val(a.rep()); }

/// e^(-v(a - b)); zero exactly when a == b.
inline double gn_dist(const GeneralizedNumber& a, const GeneralizedNumber& b) { return dist(a.rep(), b.rep()); }

/// Real class: the representative equals its pointwise conjugate.
inline bool gn_is_real(const GeneralizedNumber& a) { return a.rep() == a.rep().conj(); }

struct GnTerm {
    ExponentValue r;
    GeneralizedNumber a;

    friend bool operator==(const GnTerm& x, const GnTerm& y) { return x.r == y.r && x.a == y.a; }
};

/// sum a_n / lambda^(r_n)
class GnSeries {
public:
    GnSeries() = default;
    GnSeries(std::vector<GnTerm> terms, bool diverges_to_infinity) : terms_(std::move(terms)), diverges_(diverges_to_infinity)
    {
        std::vector<SeriesTerm> st;
        for (const auto& t : terms_) st.push_back({t.r, t.a.rep()});
        if (auto why = VAsymptoticSeries::check(st)) throw Error(ErrorKind::InvariantViolation, *why);
    }

    /// Image of an Expr-level series under the quotient map.
    static GnSeries from(const VAsymptoticSeries& s)
    {
        std::vector<GnTerm> t;
        for (const auto& term : s.terms()) t.push_back({term.r, quotient(term.phi)});
        return GnSeries(std::move(t), s.diverges_to_infinity());
    }

    const std::vector<GnTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }
    const GnTerm& operator[](std::size_t n) const { return terms_.at(n); }
    bool diverges_to_infinity() const noexcept { return diverges_; }

    friend bool operator==(const GnSeries& a, const GnSeries& b) { return a.terms_ == b.terms_ && a.diverges_ == b.diverges_; }

private:
    std::vector<GnTerm> terms_;
    bool diverges_ = false;
};

inline GnSeries gn_expand(const GeneralizedNumber& a, std::size_t max_terms = kDefaultMaxTerms)
{
    return GnSeries::from(expand(a.rep(), max_terms));
}

/// sum_{k <= n} a_k / lambda^(r_k)
inline GeneralizedNumber gn_partial_sum(const GnSeries& s, std::size_t n)
{
    if (n >= s.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "index " + std::to_string(n) + " out of range for a series of length " + std::to_string(s.size()));
    GeneralizedNumber sum;
    for (std::size_t k = 0; k <= n; ++k) sum += s[k].a * gn_lambda_power(-s[k].r);
    return sum;
}

/// d(a, partial sum through n) for every n.
inline std::vector<double> gn_dv_convergence(const GeneralizedNumber& a, const GnSeries& s)
{
    std::vector<double> d;
    for (std::size_t n = 0; n < s.size(); ++n) d.push_back(gn_dist(a, gn_partial_sum(s, n)));
    return d;
}

// Declared closed forms for v(c_n - limit), valid for n >= start.

/// v(c_n - limit) = offset + slope * n
struct AffineTail {
    std::size_t start = 0;
    ExponentValue offset;
    Rational slope;
};

/// v(c_n - limit) = cycle[(n - start) % cycle.size()]
struct PeriodicTail {
    std::size_t start = 0;
    std::vector<Valuation> cycle;
};

/// c_n = limit
struct NullTail {
    std::size_t start = 0;
};

using TailRule = std::variant<AffineTail, PeriodicTail, NullTail>;

enum class Verdict { Converges, DoesNotConverge, Undecidable };

constexpr std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::DoesNotConverge: return "does not converge";
    case Verdict::Undecidable: return "undecidable";
    }
    return "?";
}

struct ConvergenceResult {
    Verdict verdict = Verdict::Undecidable;
    std::string reason;
    /// v(c_n - limit) over the given prefix.
    std::vector<Valuation> distances;
};

namespace detail {

inline std::size_t tail_start(const TailRule& rule)
{
    return std::visit([](const auto& r) { return r.start; }, rule);
}

inline Valuation tail_value(const TailRule& rule, std::size_t n)
{
    return std::visit(
        [n](const auto& r) -> Valuation {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, AffineTail>)
                return Valuation(r.offset + r.slope * ExponentValue(Rational(static_cast<long>(n))));
            else if constexpr (std::is_same_v<T, PeriodicTail>)
                return r.cycle[(n - r.start) % r.cycle.size()];
            else
                return Valuation::infinity();
        },
        rule);
}

} // namespace detail

/// lim c_n = limit iff v(c_n - limit) -> infinity. The prefix is checked
/// exactly against the declared tail rule; the rule decides the limit.
/// For a nonzero limit the prefix must also satisfy v(c_n) = v(limit) once
/// v(c_n - limit) exceeds v(limit).
inline ConvergenceResult gn_converges(const std::vector<GeneralizedNumber>& seq, const GeneralizedNumber& limit,
                                      const std::optional<TailRule>& tail)
{
    ConvergenceResult out;
    for (const auto& c : seq) out.distances.push_back(gn_val(c - limit));
    if (!tail) {
        out.reason = "no tail rule; a finite prefix decides nothing";
        return out;
    }
    if (const auto* p = std::get_if<PeriodicTail>(&*tail); p && p->cycle.empty())
        throw Error(ErrorKind::DomainError, "periodic tail rule needs a nonempty cycle");

    const std::size_t start = detail::tail_start(*tail);
    for (std::size_t n = start; n < seq.size(); ++n) {
        Valuation want = detail::tail_value(*tail, n);
        if (out.distances[n] != want)
            throw Error(ErrorKind::DomainError, "tail rule contradicts the sequence at n = " + std::to_string(n) + ": v(c_n - limit) is "
                                                    + to_string(out.distances[n]) + ", rule says " + to_string(want));
    }

    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, AffineTail>) {
                if (r.slope > 0) {
                    out.verdict = Verdict::Converges;
                    out.reason = "v(c_n - limit) grows linearly in n";
                } else {
                    out.verdict = Verdict::DoesNotConverge;
                    out.reason = "v(c_n - limit) stays bounded";
                }
            } else if constexpr (std::is_same_v<T, PeriodicTail>) {
                bool all_null = std::all_of(r.cycle.begin(), r.cycle.end(), [](const Valuation& v) { return v.is_infinite(); });
                out.verdict = all_null ? Verdict::Converges : Verdict::DoesNotConverge;
                out.reason = all_null ? "c_n equals the limit for n >= start" : "a finite v(c_n - limit) recurs forever";
            } else {
                out.verdict = Verdict::Converges;
                out.reason = "c_n equals the limit for n >= start";
            }
        },
        *tail);

    if (out.verdict == Verdict::Converges && !limit.is_zero()) {
        Valuation vl = gn_val(limit);
        for (std::size_t n = start; n < seq.size(); ++n)
            if (out.distances[n] > vl && gn_val(seq[n]) != vl)
                throw Error(ErrorKind::InvariantViolation, "v(c_n) differs from v(limit) at n = " + std::to_string(n));
    }
    return out;
}

enum class SampledEquality { Equal, NotEqual, Unknown };

constexpr std::string_view to_string(SampledEquality e) noexcept
{
    switch (e) {
    case SampledEquality::Equal: return "equal";
    case SampledEquality::NotEqual: return "not equal";
    case SampledEquality::Unknown: return "unknown";
    }
    return "?";
}

/// Equality of black-box germs in the quotient. Equal only when the
/// difference vanishes at every sample; Unknown when its estimated valuation
/// exceeds the cutoff, since v = infinity cannot be certified from samples.
inline SampledEquality gn_sampled_equal(const Evaluator& a, const Evaluator& b, const EstimatorConfig& cfg = {}, double cutoff = 12)
{
    Evaluator diff = [&](const Real& x) { return a(x) - b(x); };
    ValEstimate e;
    try {
        e = estimate_val(diff, cfg);
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::NullCandidate) throw;
        return SampledEquality::Equal;
    }
    if (e.null) return SampledEquality::Equal;
    return e.vhat > cutoff ? SampledEquality::Unknown : SampledEquality::NotEqual;
}

inline SampledEquality gn_sampled_equal(const SampledFunction& a, const SampledFunction& b, const EstimatorConfig& cfg = {},
                                        double cutoff = 12)
{
    if (a.x != b.x) throw Error(ErrorKind::DomainError, "sampled germs must share abscissae");
    SampledFunction d;
    for (std::size_t k = 0; k < a.size(); ++k) d.push_back(a.x[k], a.value[k] - b.value[k]);
    ValEstimate e;
    try {
        e = estimate_val(d, cfg);
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::NullCandidate) throw;
        return SampledEquality::Equal;
    }
    if (e.null) return SampledEquality::Equal;
    return e.vhat > cutoff ? SampledEquality::Unknown : SampledEquality::NotEqual;
}

} // namespace vasym
