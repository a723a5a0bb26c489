#pragma once

// Linear v-independence, explicit coefficient spans, pseudostandard part and
// monads over the canonical algebra.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "vasym/expr.hpp"
#include "vasym/linalg.hpp"
#include "vasym/valuation.hpp"

namespace vasym {

/// A nonzero combination sum alpha_i f_i whose valuation is not 0.
struct IndependenceWitness {
    std::vector<Scalar> alpha;
    Valuation valuation;
};

struct IndependenceResult {
    bool independent = true;
    std::optional<IndependenceWitness> witness;

    explicit operator bool() const noexcept { return independent; }
};

namespace detail {

/// Coefficient matrix with one row per monomial key (and one per null key
/// when `with_null`), one column per element; `rho_zero_only` keeps the
/// rows with rho = 0.
inline Matrix<PiRational> coefficient_matrix(const std::vector<Expr>& fs, bool rho_zero_only, bool with_null)
{
    std::map<MonomialKey, std::size_t, MonomialKeyLess> rows;
    std::map<NullKey, std::size_t, NullKeyLess> null_rows;
    for (const auto& f : fs) {
        for (const auto& [k, c] : f.terms())
            if (!rho_zero_only || k.rho.is_zero()) rows.try_emplace(k, 0);
        if (with_null)
            for (const auto& [k, c] : f.null_part()) null_rows.try_emplace(k, 0);
    }
    std::size_t n = 0;
    for (auto& [k, idx] : rows) idx = n++;
    for (auto& [k, idx] : null_rows) idx = n++;
    Matrix<PiRational> m(n, fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        for (const auto& [k, c] : fs[j].terms()) {
            auto it = rows.find(k);
            if (it != rows.end()) m(it->second, j) = PiRational(c);
        }
        if (with_null)
            for (const auto& [k, c] : fs[j].null_part()) m(null_rows.at(k), j) = PiRational(c);
    }
    return m;
}

/// Clears denominators of a kernel vector to get Q(i)[pi] coefficients.
inline std::vector<Scalar> clear_denominators(const std::vector<PiRational>& v)
{
    Scalar common(1L);
    for (const auto& e : v) {
        if (e.is_zero() || e.den().degree() == 0) continue;
        Scalar g = Scalar::gcd(common, e.den());
        common = common * Scalar::divmod(e.den(), g).first;
    }
    std::vector<Scalar> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (e.is_zero()) {
            out.emplace_back();
            continue;
        }
        out.push_back(e.num() * Scalar::divmod(common, e.den()).first);
    }
    return out;
}

inline Expr combine(const std::vector<Expr>& fs, const std::vector<Scalar>& alpha)
{
    Expr s;
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (!alpha[i].is_zero()) s += fs[i] * alpha[i];
    return s;
}

} // namespace detail

/// True iff every nonzero complex combination of fs has valuation exactly 0.
/// Zero elements are ignored. Decided exactly: the kernel of the rho = 0
/// coefficient rows must equal the kernel of all rows (null rows included,
/// since a null combination has valuation Infinity).
inline IndependenceResult is_v_independent(const std::vector<Expr>& fs)
{
    for (std::size_t i = 0; i < fs.size(); ++i) {
        Valuation v = val(fs[i]);
        if (v.is_finite() && v.value().sign() < 0) {
            std::vector<Scalar> alpha(fs.size());
            alpha[i] = Scalar(1L);
            return {false, IndependenceWitness{std::move(alpha), v}};
        }
    }
    Matrix<PiRational> m0 = detail::coefficient_matrix(fs, true, false);
    Matrix<PiRational> full = detail::coefficient_matrix(fs, false, true);
    if (rank(m0) == rank(full)) return {true, std::nullopt};
    for (const auto& k : kernel(m0)) {
        bool in_full = true;
        for (const auto& e : full.apply(k))
            if (!e.is_zero()) {
                in_full = false;
                break;
            }
        if (in_full) continue;
        std::vector<Scalar> alpha = detail::clear_denominators(k);
        Valuation v = val(detail::combine(fs, alpha));
        return {false, IndependenceWitness{std::move(alpha), v}};
    }
    throw Error(ErrorKind::InvariantViolation, "rank mismatch without a kernel witness");
}

/// phi: the rho = 0 part (a v-constant or zero), dphi: the rest.
struct Decomposition {
    Expr phi;
    Expr dphi;
};

/// Pseudostandard part relative to the span of all rho = 0 monomials.
inline Decomposition pseudo_st(const Expr& f)
{
    Valuation v = val(f);
    if (v.is_finite() && v.value().sign() < 0)
        throw Error(ErrorKind::NotVFinite, "valuation " + to_string(v) + " is negative");
    std::vector<Monomial> phi, rest;
    for (const auto& [k, c] : f.terms()) (k.rho.is_zero() ? phi : rest).push_back({c, k});
    return {Expr::from_parts(phi), Expr::from_parts(rest, f.null_atoms())};
}

/// Explicit finite slice of a maximal coefficient space: v-independent
/// valuation-0 elements, always containing the constant 1.
class BasisSpan {
public:
    explicit BasisSpan(std::vector<Expr> basis = {})
    {
        for (const auto& b : basis) {
            Valuation v = val(b);
            if (v.is_infinite() || !v.value().is_zero())
                throw Error(ErrorKind::InvariantViolation, "basis elements need valuation 0");
        }
        if (!is_v_independent(basis))
            throw Error(ErrorKind::InvariantViolation, "basis is not v-independent");
        basis_ = std::move(basis);
        if (!coordinates(Expr(1L))) basis_.insert(basis_.begin(), Expr(1L));
    }

    const std::vector<Expr>& basis() const noexcept { return basis_; }
    std::size_t size() const noexcept { return basis_.size(); }

    /// Coefficients alpha with st(phi) = sum alpha_i st(b_i), if phi's
    /// standard part lies in the span.
    std::optional<std::vector<PiRational>> coordinates(const Expr& phi) const
    {
        std::vector<Expr> cols;
        cols.reserve(basis_.size() + 1);
        for (const auto& b : basis_) cols.push_back(pseudo_st(b).phi);
        Expr target = pseudo_st(phi).phi;
        cols.push_back(target);
        Matrix<PiRational> m = detail::coefficient_matrix(cols, false, false);
        Matrix<PiRational> a(m.rows(), basis_.size());
        std::vector<PiRational> rhs(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < basis_.size(); ++c) a(r, c) = m(r, c);
            rhs[r] = m(r, basis_.size());
        }
        return solve(a, rhs);
    }

private:
    std::vector<Expr> basis_;
};

/// Stands for the span of every rho = 0 monomial.
struct CanonicalSlice {};

/// f in the monad of span(S): f = s + d with s in the span and v(d) > 0.
inline bool in_monad(const Expr& f, const BasisSpan& span)
{
    Valuation v = val(f);
    if (v.is_finite() && v.value().sign() < 0) return false;
    return span.coordinates(f).has_value();
}

/// f in the monad of a single germ s: v(f - s) > 0.
inline bool in_monad(const Expr& f, const Expr& s) { return val(f - s).sign() > 0; }

inline bool in_monad(const Expr& f, CanonicalSlice)
{
    return val(f).sign() >= 0;
}

} // namespace vasym
