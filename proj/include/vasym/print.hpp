#pragma once

// Text form of Exprs; the output is accepted by parse_expr.

#include <string>
#include <vector>

#include "vasym/expr.hpp"

namespace vasym {

namespace detail {

inline std::string pi_power(std::size_t k)
{
    if (k == 0) return "";
    if (k == 1) return "pi";
    return "pi^" + std::to_string(k);
}

/// Signed pieces "q", "q*pi", "q*i*pi^2", ... of a scalar.
inline std::vector<std::string> scalar_pieces(const Scalar& s)
{
    std::vector<std::string> out;
    auto piece = [&](const Rational& q, bool imag, std::size_t k) {
        if (q == 0) return;
        std::string sym = imag ? "i" : "";
        std::string p = pi_power(k);
        if (!p.empty()) sym = sym.empty() ? p : sym + "*" + p;
        Rational mag = q < 0 ? Rational(-q) : q;
        std::string text;
        if (sym.empty())
            text = to_string(mag);
        else if (mag == 1)
            text = sym;
        else
            text = to_string(mag) + "*" + sym;
        out.push_back(q < 0 ? "-" + text : text);
    };
    for (std::size_t k = 0; k < s.coeffs().size(); ++k) {
        piece(s.coeffs()[k].re(), false, k);
        piece(s.coeffs()[k].im(), true, k);
    }
    return out;
}

inline std::string join_signed(const std::vector<std::string>& pieces)
{
    if (pieces.empty()) return "0";
    std::string out = pieces.front();
    for (std::size_t j = 1; j < pieces.size(); ++j) {
        const auto& p = pieces[j];
        if (p.front() == '-')
            out += " - " + p.substr(1);
        else
            out += " + " + p;
    }
    return out;
}

inline bool is_compound(const std::string& s) { return s.find(' ') != std::string::npos; }

inline std::string log_name(std::size_t depth)
{
    std::string s = "x";
    for (std::size_t j = 0; j < depth; ++j) s = "ln(" + s + ")";
    return s;
}

/// Product of the non-coefficient factors; empty for the constant key.
inline std::string key_factor(const MonomialKey& k)
{
    std::vector<std::string> f;
    if (!k.rho.is_zero()) {
        ExponentValue e = -k.rho;
        if (e == ExponentValue(1))
            f.push_back("x");
        else if (e.is_rational() && e.rational_part() > 0 && denominator(e.rational_part()) == 1)
            f.push_back("x^" + to_string(e));
        else
            f.push_back("x^(" + to_string(e) + ")");
    }
    for (std::size_t j = 1; j <= k.logs.size(); ++j) {
        int p = k.log_power(j);
        if (p == 0) continue;
        std::string l = log_name(j);
        if (p == 1)
            f.push_back(l);
        else if (p > 0)
            f.push_back(l + "^" + std::to_string(p));
        else
            f.push_back(l + "^(" + std::to_string(p) + ")");
    }
    if (!k.freq.is_zero()) {
        std::string w = to_string(k.freq);
        if (w == "1")
            f.push_back("exp(i*x)");
        else if (w == "-1")
            f.push_back("exp(-i*x)");
        else if (is_compound(w))
            f.push_back("exp((" + w + ")*i*x)");
        else
            f.push_back("exp(" + w + "*i*x)");
    }
    std::string out;
    for (const auto& s : f) out += (out.empty() ? "" : "*") + s;
    return out;
}

/// coeff * factor with the sign pulled to the front.
inline std::string term_text(const Scalar& c, const std::string& factor)
{
    auto pieces = scalar_pieces(c);
    if (factor.empty()) {
        std::string s = join_signed(pieces);
        return pieces.size() > 1 ? "(" + s + ")" : s;
    }
    if (pieces.size() == 1) {
        const std::string& p = pieces.front();
        if (p == "1") return factor;
        if (p == "-1") return "-" + factor;
        return p + "*" + factor;
    }
    return "(" + join_signed(pieces) + ")*" + factor;
}

} // namespace detail

inline std::string print_expr(const Expr& e)
{
    std::vector<std::string> terms;
    for (const auto& [k, c] : e.terms()) {
        std::string factor = detail::key_factor(k);
        if (factor.empty()) {
            // A bare multi-piece constant joins the top-level sum unparenthesized.
            for (auto& p : detail::scalar_pieces(c)) terms.push_back(p);
        } else {
            terms.push_back(detail::term_text(c, factor));
        }
    }
    for (const auto& [k, c] : e.null_part()) {
        std::string decay = k.alpha == 1 ? "exp(-x)" : "exp(-" + to_string(k.alpha) + "*x)";
        std::string factor = detail::key_factor(k.factor);
        terms.push_back(detail::term_text(c, factor.empty() ? decay : factor + "*" + decay));
    }
    return detail::join_signed(terms);
}

} // namespace vasym
