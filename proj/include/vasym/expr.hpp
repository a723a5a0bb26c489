#pragma once

// Canonical exact representation of the computable slice of the ring of
// moderate-growth germs at infinity:
//
//   f(x) = sum_k c_k x^(-rho_k) l_1(x)^(p_k1) ... l_K(x)^(p_kK) e^(i w_k x)
//        + sum_j d_j e^(-alpha_j x) * (moderate monomial factor)
//
// where l_j is the j-times iterated logarithm. Coefficients live in Q(i)[pi].
// The first sum is the monomial part; the second is the null part.

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "vasym/error.hpp"
#include "vasym/exponent.hpp"
#include "vasym/hp.hpp"
#include "vasym/scalar.hpp"

namespace vasym {

inline constexpr std::size_t kDefaultLogDepth = 3;

/// Identifies a monomial x^(-rho) * prod_j l_j^(logs[j-1]) * e^(i freq x).
/// `logs` never has trailing zeros.
struct MonomialKey {
    ExponentValue rho;
    std::vector<int> logs;
    Frequency freq;

    MonomialKey() = default;
    MonomialKey(ExponentValue r, std::vector<int> l = {}, Frequency w = {})
        : rho(std::move(r)), logs(std::move(l)), freq(std::move(w))
    {
        trim();
    }

    int log_power(std::size_t depth) const { return depth >= 1 && depth <= logs.size() ? logs[depth - 1] : 0; }
    std::size_t log_depth() const noexcept { return logs.size(); }
    bool is_constant() const { return rho.is_zero() && logs.empty() && freq.is_zero(); }

    void trim()
    {
        while (!logs.empty() && logs.back() == 0) logs.pop_back();
    }

    friend MonomialKey operator*(const MonomialKey& a, const MonomialKey& b)
    {
        std::vector<int> l(std::max(a.logs.size(), b.logs.size()), 0);
        for (std::size_t j = 0; j < a.logs.size(); ++j) l[j] += a.logs[j];
        for (std::size_t j = 0; j < b.logs.size(); ++j) l[j] += b.logs[j];
        return {a.rho + b.rho, std::move(l), a.freq + b.freq};
    }

    /// Key of the complex-conjugate monomial (rho and logs are real).
    MonomialKey conj() const { return {rho, logs, -freq}; }

    friend bool operator==(const MonomialKey& a, const MonomialKey& b)
    {
        return a.rho == b.rho && a.logs == b.logs && a.freq == b.freq;
    }
};

/// rho ascending, then log powers lexicographic, then frequency ascending.
struct MonomialKeyLess {
    bool operator()(const MonomialKey& a, const MonomialKey& b) const
    {
        if (!(a.rho == b.rho)) return a.rho < b.rho;
        std::size_t n = std::max(a.logs.size(), b.logs.size());
        for (std::size_t j = 0; j < n; ++j) {
            int pa = j < a.logs.size() ? a.logs[j] : 0;
            int pb = j < b.logs.size() ? b.logs[j] : 0;
            if (pa != pb) return pa < pb;
        }
        if (!(a.freq == b.freq)) return a.freq < b.freq;
        return false;
    }
};

/// Null atom key: decay rate alpha > 0 together with its moderate factor.
struct NullKey {
    Rational alpha;
    MonomialKey factor;

    friend bool operator==(const NullKey& a, const NullKey& b) { return a.alpha == b.alpha && a.factor == b.factor; }
};

struct NullKeyLess {
    bool operator()(const NullKey& a, const NullKey& b) const
    {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return MonomialKeyLess{}(a.factor, b.factor);
    }
};

struct Monomial {
    Scalar coeff;
    MonomialKey key;
};

struct NullAtom {
    Scalar coeff;
    Rational alpha;
    MonomialKey factor;
};

class Expr {
public:
    using TermMap = std::map<MonomialKey, Scalar, MonomialKeyLess>;
    using NullMap = std::map<NullKey, Scalar, NullKeyLess>;

    Expr() = default;
    Expr(long c) : Expr(Scalar(c)) {}
    Expr(const Scalar& c)
    {
        if (!c.is_zero()) terms_.emplace(MonomialKey{}, c);
    }

    static Expr monomial(const Scalar& coeff, const MonomialKey& key)
    {
        Expr e;
        if (!coeff.is_zero()) e.terms_.emplace(key, coeff);
        return e;
    }

    /// coeff * e^(-alpha x) * factor, alpha > 0.
    static Expr null_atom(const Scalar& coeff, const Rational& alpha, const MonomialKey& factor = {})
    {
        if (alpha <= 0) throw Error(ErrorKind::NotModerate, "null atom needs a positive decay rate");
        Expr e;
        if (!coeff.is_zero()) e.null_.emplace(NullKey{alpha, factor}, coeff);
        return e;
    }

    /// Canonicalizes an arbitrary list of monomials and null atoms.
    static Expr from_parts(const std::vector<Monomial>& monomials, const std::vector<NullAtom>& atoms = {})
    {
        Expr e;
        for (const auto& m : monomials) e.accumulate(m.key, m.coeff);
        for (const auto& a : atoms) {
            if (a.alpha <= 0) throw Error(ErrorKind::NotModerate, "null atom needs a positive decay rate");
            e.accumulate_null(NullKey{a.alpha, a.factor}, a.coeff);
        }
        return e;
    }

    /// x^(-rho)
    static Expr x_power(const ExponentValue& rho) { return monomial(Scalar(1L), MonomialKey(rho)); }
    /// l_depth(x)^power
    static Expr log_power(std::size_t depth, int power)
    {
        if (depth == 0) throw Error(ErrorKind::DomainError, "log depth starts at 1");
        std::vector<int> logs(depth, 0);
        logs[depth - 1] = power;
        return monomial(Scalar(1L), MonomialKey(ExponentValue{}, std::move(logs)));
    }
    /// e^(i w x)
    static Expr oscillator(const Frequency& w) { return monomial(Scalar(1L), MonomialKey(ExponentValue{}, {}, w)); }
    /// sin(w x) = (e^(iwx) - e^(-iwx)) / (2i)
    static Expr sin(const Frequency& w)
    {
        Scalar half_over_i = Scalar(ComplexRational(Rational(0), Rational(-1, 2)));
        return oscillator(w) * half_over_i - oscillator(-w) * half_over_i;
    }
    /// cos(w x) = (e^(iwx) + e^(-iwx)) / 2
    static Expr cos(const Frequency& w)
    {
        Scalar half(Rational(1, 2));
        return oscillator(w) * half + oscillator(-w) * half;
    }

    const TermMap& terms() const noexcept { return terms_; }
    const NullMap& null_part() const noexcept { return null_; }

    std::vector<Monomial> monomials() const
    {
        std::vector<Monomial> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_) out.push_back({c, k});
        return out;
    }
    std::vector<NullAtom> null_atoms() const
    {
        std::vector<NullAtom> out;
        out.reserve(null_.size());
        for (const auto& [k, c] : null_) out.push_back({c, k.alpha, k.factor});
        return out;
    }

    bool is_zero() const noexcept { return terms_.empty() && null_.empty(); }
    /// True when the monomial part is empty, i.e. the germ is null.
    bool is_null() const noexcept { return terms_.empty(); }
    bool has_null_part() const noexcept { return !null_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Drops the null part.
    Expr moderate_part() const
    {
        Expr e;
        e.terms_ = terms_;
        return e;
    }

    /// Deepest iterated logarithm present.
    std::size_t log_depth() const
    {
        std::size_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.log_depth());
        for (const auto& [k, c] : null_) d = std::max(d, k.factor.log_depth());
        return d;
    }

    Scalar coeff(const MonomialKey& key) const
    {
        auto it = terms_.find(key);
        return it == terms_.end() ? Scalar() : it->second;
    }

    /// Pointwise complex conjugate.
    Expr conj() const
    {
        Expr e;
        for (const auto& [k, c] : terms_) e.accumulate(k.conj(), c.conj());
        for (const auto& [k, c] : null_) e.accumulate_null(NullKey{k.alpha, k.factor.conj()}, c.conj());
        return e;
    }

    Expr& operator+=(const Expr& o)
    {
        for (const auto& [k, c] : o.terms_) accumulate(k, c);
        for (const auto& [k, c] : o.null_) accumulate_null(k, c);
        return *this;
    }
    Expr& operator-=(const Expr& o)
    {
        for (const auto& [k, c] : o.terms_) accumulate(k, -c);
        for (const auto& [k, c] : o.null_) accumulate_null(k, -c);
        return *this;
    }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator-(const Expr& a) { return a * Scalar(-1L); }

    friend Expr operator*(const Expr& a, const Scalar& s)
    {
        Expr e;
        if (s.is_zero()) return e;
        for (const auto& [k, c] : a.terms_) e.terms_.emplace_hint(e.terms_.end(), k, c * s);
        for (const auto& [k, c] : a.null_) e.null_.emplace_hint(e.null_.end(), k, c * s);
        return e;
    }
    friend Expr operator*(const Scalar& s, const Expr& a) { return a * s; }

    friend Expr operator*(const Expr& a, const Expr& b)
    {
        Expr e;
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) e.accumulate(ka * kb, ca * cb);
            for (const auto& [kb, cb] : b.null_) e.accumulate_null(NullKey{kb.alpha, ka * kb.factor}, ca * cb);
        }
        for (const auto& [ka, ca] : a.null_) {
            for (const auto& [kb, cb] : b.terms_) e.accumulate_null(NullKey{ka.alpha, ka.factor * kb}, ca * cb);
            for (const auto& [kb, cb] : b.null_)
                e.accumulate_null(NullKey{Rational(ka.alpha + kb.alpha), ka.factor * kb.factor}, ca * cb);
        }
        return e;
    }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

    friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_ && a.null_ == b.null_; }

    /// Divides every term (null atoms included) by x^r: rho -> rho + r.
    friend Expr scale_by_power(const Expr& a, const ExponentValue& r)
    {
        if (r.is_zero()) return a;
        Expr e;
        for (const auto& [k, c] : a.terms_) e.terms_.emplace(MonomialKey(k.rho + r, k.logs, k.freq), c);
        for (const auto& [k, c] : a.null_)
            e.null_.emplace(NullKey{k.alpha, MonomialKey(k.factor.rho + r, k.factor.logs, k.factor.freq)}, c);
        return e;
    }

private:
    void accumulate(const MonomialKey& k, const Scalar& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void accumulate_null(const NullKey& k, const Scalar& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = null_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) null_.erase(it);
        }
    }

    TermMap terms_;
    NullMap null_;
};

inline Expr add(const Expr& a, const Expr& b) { return a + b; }
inline Expr mul(const Expr& a, const Expr& b) { return a * b; }

/// Inverse of a single-monomial Expr with a unit coefficient; throws
/// NonInvertibleDivisor otherwise (sums such as sin x are zero divisors),
/// NotModerate for null germs.
inline Expr reciprocal(const Expr& a)
{
    if (a.has_null_part() && a.is_null()) throw Error(ErrorKind::NotModerate, "reciprocal of a null germ grows too fast");
    if (a.has_null_part() || a.size() != 1)
        throw Error(ErrorKind::NonInvertibleDivisor, "divisor is not a single invertible monomial");
    const auto& [k, c] = *a.terms().begin();
    std::vector<int> logs(k.logs.size());
    for (std::size_t j = 0; j < logs.size(); ++j) logs[j] = -k.logs[j];
    return Expr::monomial(c.inverse(), MonomialKey(-k.rho, std::move(logs), -k.freq));
}

namespace detail {

/// Values of l_1(x), ..., l_depth(x); throws if any is not positive.
inline std::vector<Real> iterated_logs(const Real& x, std::size_t depth)
{
    std::vector<Real> out;
    out.reserve(depth);
    Real cur = x;
    for (std::size_t j = 1; j <= depth; ++j) {
        if (cur <= 0) break;
        cur = boost::multiprecision::log(cur);
        if (cur <= 0)
            throw Error(ErrorKind::DomainError,
                        "x too small: iterated log of depth " + std::to_string(j) + " is not positive");
        out.push_back(cur);
    }
    return out;
}

inline HpComplex eval_key(const MonomialKey& k, const Real& x, const Real& logx, const std::vector<Real>& logs)
{
    Real mag = k.rho.is_zero() ? Real(1) : Real(boost::multiprecision::exp(-to_hp(k.rho) * logx));
    for (std::size_t j = 0; j < k.logs.size(); ++j) {
        int p = k.logs[j];
        if (p == 0) continue;
        mag *= boost::multiprecision::pow(logs[j], p);
    }
    if (k.freq.is_zero()) return HpComplex(mag);
    return HpComplex::expi(to_hp(k.freq) * x) * mag;
}

} // namespace detail

/// Value of `a` at x, carried out with `precision` bits plus guard bits.
/// Requires x > 0 and every iterated log present to be positive at x.
inline HpComplex eval_at(const Expr& a, const Real& x, unsigned precision = 128)
{
    if (precision < 53) throw Error(ErrorKind::DomainError, "precision must be at least 53 bits");
    if (x <= 0) throw Error(ErrorKind::DomainError, "evaluation point must be positive");
    // Phase arguments w*x lose log2(|w x|) bits to range reduction.
    double mag = std::max(1.0, std::abs(x.convert_to<double>()));
    unsigned guard = 64 + static_cast<unsigned>(std::ceil(std::log2(mag + 1.0))) + 8;
    WorkingPrecision wp(precision + guard);
    Real xx(x);
    std::size_t depth = a.log_depth();
    std::vector<Real> logs = detail::iterated_logs(xx, depth);
    if (logs.size() < depth) throw Error(ErrorKind::DomainError, "x too small for the iterated-log depth");
    Real logx = depth > 0 ? logs[0] : Real(boost::multiprecision::log(xx));
    HpComplex sum;
    for (const auto& [k, c] : a.terms()) sum += to_hp(c) * detail::eval_key(k, xx, logx, logs);
    for (const auto& [k, c] : a.null_part()) {
        HpComplex v = to_hp(c) * detail::eval_key(k.factor, xx, logx, logs);
        sum += v * Real(boost::multiprecision::exp(-to_hp(k.alpha) * xx));
    }
    return sum;
}

inline HpComplex eval_at(const Expr& a, double x, unsigned precision = 128)
{
    WorkingPrecision wp(precision);
    return eval_at(a, Real(x), precision);
}

} // namespace vasym
