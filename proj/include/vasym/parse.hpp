#pragma once

// Recursive-descent parser for the expression language:
//
//   expr   := term {("+"|"-") term}
//   term   := unary {("*"|"/") unary}
//   unary  := ("-"|"+") unary | power
//   power  := atom ["^" exponent]
//   atom   := number | "i" | "pi" | "x" | "ln(" arg ")" | "sin(" lin ")"
//           | "cos(" lin ")" | "exp(" lin ")" | "(" expr ")"
//   exponent := signed number | "(" constant expr ")"
//
// `lin` is a multiple of x; exp(c*x) is an oscillator for imaginary c, a
// null atom for negative real part, NotModerate for positive real part.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "vasym/expr.hpp"

namespace vasym {

struct ParseOptions {
    std::size_t log_depth = kDefaultLogDepth;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view src, ParseOptions opt) : src_(src), opt_(opt) {}

    Expr parse()
    {
        skip_ws();
        if (pos_ == src_.size()) throw SyntaxError(pos_, "empty expression");
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(ErrorKind k, std::size_t at, const std::string& msg) const
    {
        throw Error(k, msg + " at offset " + std::to_string(at));
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool peek(char c)
    {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }
    bool accept(char c)
    {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }
    void expect(char c)
    {
        if (!accept(c)) throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e += term();
            else if (accept('-'))
                e -= term();
            else
                return e;
        }
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (peek('/')) {
                ++pos_;
                skip_ws();
                std::size_t at = pos_;
                Expr d = unary();
                try {
                    e = e * reciprocal(d);
                } catch (const Error& err) {
                    fail(err.kind(), at, "cannot divide by this expression");
                }
            } else {
                return e;
            }
        }
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        skip_ws();
        std::size_t at = pos_;
        bool is_x = false;
        Expr base = atom(is_x);
        if (!accept('^')) return base;
        skip_ws();
        std::size_t exp_at = pos_;
        ExponentValue e = exponent();
        if (is_x) return Expr::x_power(-e);
        if (!e.is_rational() || denominator(e.rational_part()) != 1)
            fail(ErrorKind::Unsupported, exp_at, "only integer powers of compound expressions");
        Integer n = numerator(e.rational_part());
        if (abs(n) > 4096) fail(ErrorKind::Unsupported, exp_at, "power too large");
        long k = n.convert_to<long>();
        if (k < 0) {
            try {
                base = reciprocal(base);
            } catch (const Error& err) {
                fail(err.kind(), at, "cannot invert base of negative power");
            }
            k = -k;
        }
        Expr out(1L);
        for (long j = 0; j < k; ++j) out = out * base;
        return out;
    }

    ExponentValue exponent()
    {
        skip_ws();
        if (peek('(')) {
            std::size_t at = pos_;
            ++pos_;
            Expr c = expr();
            expect(')');
            return constant_exponent(c, at);
        }
        bool neg = accept('-');
        if (!neg) accept('+');
        skip_ws();
        Rational q = number();
        return ExponentValue(neg ? Rational(-q) : q);
    }

    ExponentValue constant_exponent(const Expr& c, std::size_t at)
    {
        if (c.is_zero()) return {};
        if (c.has_null_part() || c.size() != 1 || !c.terms().begin()->first.is_constant())
            fail(ErrorKind::Unsupported, at, "exponent must be a constant");
        const Scalar& s = c.terms().begin()->second;
        if (!s.is_real() || s.degree() > 2) fail(ErrorKind::Unsupported, at, "exponent must lie in Q + Q*pi + Q*pi^2");
        return ExponentValue(s.coeff(0).re(), s.coeff(1).re(), s.coeff(2).re());
    }

    Rational number()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (start == pos_) throw SyntaxError(start, "expected a number");
        std::string_view text = src_.substr(start, pos_ - start);
        if (text.find('.') != text.rfind('.') || text == ".") throw SyntaxError(start, "malformed number");
        return parse_rational(text);
    }

    std::string identifier()
    {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    Expr atom(bool& is_x)
    {
        skip_ws();
        if (pos_ == src_.size()) throw SyntaxError(pos_, "unexpected end of input");
        std::size_t at = pos_;
        char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return Expr(Scalar(number()));
        if (ch == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(ch))) throw SyntaxError(pos_, "unexpected '" + std::string(1, ch) + "'");
        std::string id = identifier();
        if (id == "x") {
            is_x = true;
            return Expr::x_power(ExponentValue(-1));
        }
        if (id == "i") return Expr(Scalar::i());
        if (id == "pi") return Expr(Scalar::pi());
        if (id == "ln" || id == "sin" || id == "cos" || id == "exp") {
            expect('(');
            skip_ws();
            std::size_t arg_at = pos_;
            Expr arg = expr();
            expect(')');
            if (id == "ln") return log_of(arg, arg_at);
            if (id == "exp") return exp_of(arg, arg_at);
            Scalar w = linear_coefficient(arg, arg_at);
            if (!w.is_real() || w.degree() > 1) fail(ErrorKind::Unsupported, arg_at, "sin/cos need a real multiple of x");
            Frequency f(w.coeff(0).re(), w.coeff(1).re());
            return id == "sin" ? Expr::sin(f) : Expr::cos(f);
        }
        throw SyntaxError(at, "unknown identifier '" + id + "'");
    }

    /// ln(x) or ln(l_j(x)).
    Expr log_of(const Expr& arg, std::size_t at)
    {
        if (arg.size() == 1 && !arg.has_null_part()) {
            const auto& [k, c] = *arg.terms().begin();
            if (c == Scalar(1L) && k.freq.is_zero()) {
                std::size_t depth = 0;
                if (k.rho == ExponentValue(-1) && k.logs.empty()) {
                    depth = 1;
                } else if (k.rho.is_zero() && !k.logs.empty() && k.logs.back() == 1) {
                    bool single = true;
                    for (std::size_t j = 0; j + 1 < k.logs.size(); ++j) single = single && k.logs[j] == 0;
                    if (single) depth = k.logs.size() + 1;
                }
                if (depth > opt_.log_depth)
                    fail(ErrorKind::Unsupported, at, "iterated log deeper than " + std::to_string(opt_.log_depth));
                if (depth > 0) return Expr::log_power(depth, 1);
            }
        }
        fail(ErrorKind::Unsupported, at, "ln needs x or an iterated log of x");
    }

    /// c with arg = c*x.
    Scalar linear_coefficient(const Expr& arg, std::size_t at)
    {
        if (arg.is_zero()) return {};
        if (arg.has_null_part()) fail(ErrorKind::Unsupported, at, "argument must be a multiple of x");
        Scalar c;
        for (const auto& [k, coeff] : arg.terms()) {
            if (k.is_constant())
                fail(ErrorKind::Unsupported, at, "constant offsets inside exp/sin/cos are not supported");
            if (!(k.rho == ExponentValue(-1)) || !k.logs.empty() || !k.freq.is_zero())
                fail(ErrorKind::Unsupported, at, "argument must be a multiple of x");
            c = coeff;
        }
        return c;
    }

    Expr exp_of(const Expr& arg, std::size_t at)
    {
        Scalar c = linear_coefficient(arg, at);
        std::vector<ComplexRational> re, im;
        for (const auto& z : c.coeffs()) {
            re.emplace_back(z.re());
            im.emplace_back(z.im());
        }
        Scalar real(re), imag(im);
        if (imag.degree() > 1) fail(ErrorKind::Unsupported, at, "frequency must lie in Q + Q*pi");
        Frequency w(imag.coeff(0).re(), imag.coeff(1).re());
        MonomialKey osc(ExponentValue{}, {}, w);
        if (real.is_zero()) return Expr::monomial(Scalar(1L), osc);
        if (real.degree() > 0) {
            if (ExponentValue(real.coeff(0).re(), real.coeff(1).re(), real.coeff(2).re()).sign() > 0 || real.degree() > 2)
                fail(ErrorKind::NotModerate, at, "exponential growth is not moderate");
            fail(ErrorKind::Unsupported, at, "decay rate must be rational");
        }
        Rational a = real.coeff(0).re();
        if (a > 0) fail(ErrorKind::NotModerate, at, "exponential growth is not moderate");
        return Expr::null_atom(Scalar(1L), Rational(-a), osc);
    }

    std::string_view src_;
    ParseOptions opt_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(std::string_view src, ParseOptions opt = {})
{
    return detail::Parser(src, opt).parse();
}

} // namespace vasym
