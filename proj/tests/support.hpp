#pragma once

// Deterministic random canonical Exprs for property tests.

#include <algorithm>
#include <random>
#include <vector>

#include <ostream>

#include "vasym/print.hpp"
#include "vasym/series.hpp"
#include "vasym/valuation.hpp"

namespace vasym {

// gtest value printers
template <class Tag>
void PrintTo(const PiQuadratic<Tag>& v, std::ostream* os)
{
    *os << to_string(v);
}
inline void PrintTo(const Expr& e, std::ostream* os) { *os << print_expr(e); }
inline void PrintTo(const Valuation& v, std::ostream* os) { *os << to_string(v); }

} // namespace vasym

namespace vasym::testing {

class ExprGen {
public:
    explicit ExprGen(unsigned seed = 12345) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Scalar scalar()
    {
        auto q = [&] {
            int d = uniform(1, 4);
            return Rational(uniform(-5, 5), d);
        };
        Scalar s(ComplexRational(q(), coin(0.3) ? q() : Rational(0)));
        if (coin(0.15)) s = s + Scalar::pi() * Scalar(q());
        if (s.is_zero()) s = Scalar(1L);
        return s;
    }

    ExponentValue exponent(bool allow_negative = true)
    {
        switch (uniform(0, 7)) {
        case 0: return {Rational(0), Rational(1)};
        case 1: return {Rational(1), Rational(0), Rational(1)};
        case 2: return ExponentValue(Rational(uniform(0, 8), 2));
        default: {
            int lo = allow_negative ? -8 : 0;
            return ExponentValue(Rational(uniform(lo, 12), 4));
        }
        }
    }

    MonomialKey key(bool allow_negative = true, std::size_t depth = 3)
    {
        std::vector<int> logs;
        if (coin(0.6)) {
            std::size_t n = static_cast<std::size_t>(uniform(1, static_cast<int>(depth)));
            for (std::size_t j = 0; j < n; ++j) logs.push_back(uniform(-2, 2));
        }
        static const Frequency freqs[] = {Frequency(0), Frequency(1), Frequency(-1), Frequency(Rational(0), Rational(1)),
                                          Frequency(Rational(0), Rational(-1)), Frequency(2)};
        Frequency w = coin(0.5) ? Frequency(0) : freqs[uniform(0, 5)];
        return {exponent(allow_negative), logs, w};
    }

    /// Random canonical Expr with up to `max_terms` monomials and an
    /// occasional null part.
    Expr expr(int max_terms = 4, bool allow_negative = true, bool with_null = true)
    {
        std::vector<Monomial> ms;
        int n = uniform(1, max_terms);
        for (int j = 0; j < n; ++j) ms.push_back({scalar(), key(allow_negative)});
        std::vector<NullAtom> atoms;
        if (with_null && coin(0.2)) atoms.push_back({scalar(), Rational(uniform(1, 3)), key(allow_negative)});
        return Expr::from_parts(ms, atoms);
    }

    /// Single nonzero monomial.
    Expr monomial(bool allow_negative = true) { return Expr::monomial(scalar(), key(allow_negative)); }

    /// Expr with valuation >= 0.
    Expr v_finite(int max_terms = 4) { return expr(max_terms, false); }

private:
    std::mt19937 rng_;
};

/// Grouping oracle: bucket monomials by exact exponent with a linear scan,
/// then sort the buckets.
inline std::vector<SeriesTerm> group_by_rho(const Expr& f)
{
    std::vector<std::pair<ExponentValue, std::vector<Monomial>>> buckets;
    for (const auto& m : f.monomials()) {
        auto it = std::find_if(buckets.begin(), buckets.end(), [&](const auto& b) { return b.first == m.key.rho; });
        Monomial shifted{m.coeff, MonomialKey(ExponentValue{}, m.key.logs, m.key.freq)};
        if (it == buckets.end())
            buckets.push_back({m.key.rho, {shifted}});
        else
            it->second.push_back(shifted);
    }
    std::sort(buckets.begin(), buckets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SeriesTerm> out;
    for (auto& [r, ms] : buckets) out.push_back({r, Expr::from_parts(ms)});
    return out;
}

} // namespace vasym::testing
