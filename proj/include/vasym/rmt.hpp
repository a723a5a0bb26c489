#pragma once

// The oscillatory Gaussian integral
//     I(x) = int_{-pi}^{pi} exp(i x y - y^2 ln x) f(y) dy
// for polynomial f: quadrature, exact expansion coefficients, and a numeric
// check of the expansion I ~ sum phi_n(x) / x^(pi^2 + 1 + n).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vasym/error.hpp"
#include "vasym/estimator.hpp"
#include "vasym/expr.hpp"
#include "vasym/hp.hpp"
#include "vasym/json.hpp"
#include "vasym/parse.hpp"
#include "vasym/quadrature.hpp"
#include "vasym/scalar.hpp"
#include "vasym/series.hpp"

namespace vasym {

/// f(y) = sum a_k y^k with real coefficients in Q[pi].
class BoundaryData {
public:
    BoundaryData() = default;
    explicit BoundaryData(std::vector<Scalar> poly) : poly_(std::move(poly))
    {
        for (const auto& c : poly_)
            if (!c.is_real()) throw Error(ErrorKind::DomainError, "polynomial coefficients must be real");
        while (!poly_.empty() && poly_.back().is_zero()) poly_.pop_back();
    }
    explicit BoundaryData(const std::vector<Rational>& poly) : BoundaryData(std::vector<Scalar>(poly.begin(), poly.end())) {}

    /// "a0,a1,..." where each item is a constant expression such as 1/3 or -pi^2.
    static BoundaryData parse(std::string_view text)
    {
        std::vector<Scalar> out;
        std::string item;
        std::istringstream in{std::string(text)};
        while (std::getline(in, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) throw Error(ErrorKind::Syntax, "empty polynomial coefficient");
            Expr e = parse_expr(item);
            if (e.is_zero()) {
                out.emplace_back();
                continue;
            }
            if (e.has_null_part() || e.size() != 1 || !e.terms().begin()->first.is_constant())
                throw Error(ErrorKind::DomainError, "polynomial coefficient '" + item + "' is not a constant");
            out.push_back(e.terms().begin()->second);
        }
        if (out.empty()) throw Error(ErrorKind::Syntax, "empty polynomial");
        return BoundaryData(std::move(out));
    }

    const std::vector<Scalar>& poly() const noexcept { return poly_; }
    bool is_zero() const noexcept { return poly_.empty(); }
    int degree() const noexcept { return static_cast<int>(poly_.size()) - 1; }

    BoundaryData derivative(std::size_t m = 1) const
    {
        std::vector<Scalar> p = poly_;
        for (std::size_t k = 0; k < m && !p.empty(); ++k) {
            std::vector<Scalar> d;
            for (std::size_t j = 1; j < p.size(); ++j) d.push_back(p[j] * Scalar(long(j)));
            p = std::move(d);
        }
        return BoundaryData(std::move(p));
    }

    /// f^(m)(sign * pi), exact.
    Scalar at(int sign, std::size_t m = 0) const
    {
        const auto& p = derivative(m).poly_;
        Scalar acc;
        Scalar y = sign < 0 ? -Scalar::pi() : Scalar::pi();
        for (std::size_t k = p.size(); k-- > 0;) acc = acc * y + p[k];
        return acc;
    }

    Real operator()(const Real& y) const
    {
        Real acc = 0;
        for (std::size_t k = poly_.size(); k-- > 0;) acc = acc * y + to_hp(poly_[k]).re;
        return acc;
    }

    /// Upper bound for max |f| on [-pi, pi].
    Real bound() const
    {
        Real pi = hp_pi(), acc = 0;
        for (std::size_t k = poly_.size(); k-- > 0;) acc = acc * pi + boost::multiprecision::abs(to_hp(poly_[k]).re);
        return acc;
    }

    friend bool operator==(const BoundaryData&, const BoundaryData&) = default;

private:
    std::vector<Scalar> poly_;
};

enum class QuadratureScheme { GaussLegendre, ClenshawCurtis };

struct QuadratureOptions {
    QuadratureScheme scheme = QuadratureScheme::GaussLegendre;
    std::size_t initial_nodes = 24;
    std::size_t max_doublings = 4;
    /// Panels per unit of the default count; 2 halves the panel width.
    double panel_density = 1;
};

struct IntegralValue {
    HpComplex value;
    std::size_t nodes = 0;
    std::size_t panels = 0;
    unsigned working_bits = 0;
};

/// pi^2 + 1 + n
inline ExponentValue rmt_exponent(std::size_t n) { return ExponentValue(Rational(long(n + 1)), Rational(0), Rational(1)); }

inline constexpr unsigned kRmtGuardBits = 32;

/// Bits of the result that survive above the tolerance floor at x.
inline double rmt_headroom_bits(double x, unsigned bits)
{
    return double(bits) - 30 - (std::numbers::pi * std::numbers::pi + 1) * std::log2(x);
}

inline IntegralValue rmt_integral(const Real& x, const BoundaryData& f, unsigned bits, const QuadratureOptions& opt = {})
{
    if (!(x > 1)) throw Error(ErrorKind::DomainError, "I(x) needs x > 1");
    double xd = x.convert_to<double>();
    if (bits < 128) throw Error(ErrorKind::PrecisionTooLow, "at least 128 bits are required");
    if (rmt_headroom_bits(xd, bits) < 32)
        throw Error(ErrorKind::PrecisionTooLow, std::to_string(bits) + " bits cannot resolve I(x) ~ x^-(pi^2+1) at x = " + to_decimal(x, 6));
    const unsigned wb = bits + kRmtGuardBits;
    WorkingPrecision wp(wb);
    IntegralValue out;
    out.working_bits = wb;
    if (f.is_zero()) return out;

    Real xx = x, L = boost::multiprecision::log(xx), pi = hp_pi();
    Real tol = boost::multiprecision::ldexp(f.bound(), -int(bits - 30));

    std::vector<Real> even, odd;
    for (std::size_t k = 0; k < f.poly().size(); ++k) (k % 2 ? odd : even).push_back(to_hp(f.poly()[k]).re);
    auto horner = [](const std::vector<Real>& c, const Real& t) {
        Real acc = 0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
        return acc;
    };

    // f = E(y^2) + y O(y^2): the even part pairs with cos, the odd part with sin
    auto symmetric = [&](const Real& y) {
        Real y2 = y * y;
        Real g = boost::multiprecision::exp(-L * y2);
        HpComplex e = HpComplex::expi(xx * y);
        return HpComplex(Real(g * horner(even, y2) * e.re), Real(g * y * horner(odd, y2) * e.im));
    };
    auto direct = [&](const Real& y) {
        Real g = boost::multiprecision::exp(-L * y * y) * f(y);
        return HpComplex::expi(xx * y) * g;
    };

    // each period 2 pi / x spans at least four panels
    std::size_t full_panels = std::max<std::size_t>(8, std::size_t(std::ceil(4 * xd * opt.panel_density)));
    auto compute = [&](std::size_t n) {
        if (opt.scheme == QuadratureScheme::GaussLegendre) {
            out.panels = (full_panels + 1) / 2;
            return integrate_panels(symmetric, Real(0), pi, out.panels, gauss_legendre(n, wb)) * Real(2);
        }
        out.panels = full_panels;
        return integrate_panels(direct, Real(-pi), pi, out.panels, clenshaw_curtis(n + n % 2, wb));
    };

    std::size_t n = std::max<std::size_t>(opt.initial_nodes, 2);
    HpComplex prev = compute(n);
    for (std::size_t d = 0; d < opt.max_doublings; ++d) {
        n *= 2;
        HpComplex cur = compute(n);
        if ((cur - prev).abs() <= tol) {
            out.value = cur;
            out.nodes = n;
            return out;
        }
        prev = std::move(cur);
    }
    throw Error(ErrorKind::NonConvergent, "quadrature did not settle after " + std::to_string(opt.max_doublings) + " doublings");
}

inline HpComplex rmt_integral_eval(const Real& x, const BoundaryData& f, unsigned bits, const QuadratureOptions& opt = {})
{
    return rmt_integral(x, f, bits, opt).value;
}

inline HpComplex rmt_integral_eval(double x, const BoundaryData& f, unsigned bits, const QuadratureOptions& opt = {})
{
    WorkingPrecision wp(bits + kRmtGuardBits);
    return rmt_integral(Real(x), f, bits, opt).value;
}

/// Exact: repeated integration by parts, keeping every derivative of the
/// Gaussian factor. TopLog: only the top power of ln x from each derivative.
enum class RmtFormula { Exact, TopLog };

namespace detail {

// d^j/dy^j exp(-L y^2) = P_j(y, L) exp(-L y^2); entries keyed by (power of y, power of L)
using Bivariate = std::map<std::pair<int, int>, Rational>;

inline std::vector<Bivariate> gaussian_derivative_factors(std::size_t n, RmtFormula formula)
{
    std::vector<Bivariate> P(n + 1);
    P[0][{0, 0}] = 1;
    for (std::size_t j = 0; j < n; ++j) {
        Bivariate next;
        for (const auto& [k, c] : P[j]) {
            auto [a, b] = k;
            if (a > 0 && formula == RmtFormula::Exact) next[{a - 1, b}] += c * Rational(a);
            next[{a + 1, b + 1}] += c * Rational(-2);
        }
        std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
        P[j + 1] = std::move(next);
    }
    return P;
}

inline Scalar binomial(std::size_t n, std::size_t k)
{
    Integer r = 1;
    for (std::size_t j = 1; j <= k; ++j) r = r * Integer(n + 1 - j) / Integer(j);
    return Scalar(Rational(r));
}

} // namespace detail

inline Expr rmt_coefficient(const BoundaryData& f, std::size_t n, RmtFormula formula = RmtFormula::Exact)
{
    // (-1)^n / i^(n+1) = (-1)^n (-i)^(n+1)
    Scalar pre(n % 2 ? -1L : 1L);
    for (std::size_t k = 0; k <= n; ++k) pre = pre * -Scalar::i();
    auto P = detail::gaussian_derivative_factors(n, formula);
    Expr out;
    for (std::size_t j = 0; j <= n; ++j) {
        for (int s : {1, -1}) {
            Scalar fb = f.at(s, n - j);
            if (fb.is_zero()) continue;
            std::map<int, Scalar> by_log;
            for (const auto& [k, c] : P[j]) {
                Scalar y = Scalar(c);
                for (int a = 0; a < k.first; ++a) y = y * (s > 0 ? Scalar::pi() : -Scalar::pi());
                by_log[k.second] = by_log[k.second] + y;
            }
            Frequency w(Rational(0), Rational(s));
            for (const auto& [b, c] : by_log) {
                Scalar coeff = pre * detail::binomial(n, j) * c * fb * Scalar(long(s));
                out += Expr::monomial(coeff, MonomialKey(ExponentValue{}, {b}, w));
            }
        }
    }
    return out;
}

inline VAsymptoticSeries rmt_series(const BoundaryData& f, std::size_t terms, RmtFormula formula = RmtFormula::Exact)
{
    if (terms == 0) throw Error(ErrorKind::DomainError, "need at least one term");
    std::vector<SeriesTerm> out;
    for (std::size_t n = 0; n < terms; ++n) out.push_back({rmt_exponent(n), rmt_coefficient(f, n, formula)});
    try {
        return VAsymptoticSeries(std::move(out), true);
    } catch (const Error& e) {
        throw Error(ErrorKind::InvariantViolation, std::string("internal: generated series is not canonical: ") + e.what());
    }
}

struct RmtRow {
    double x = 0;
    double abs_I = 0;
    std::size_t n = 0;
    double scaled_residual = 0;
    double vhat = 0;
    bool pass = false;
};

struct RmtTerm {
    std::size_t n = 0;
    double vhat = 0;
    double std_error = 0;
    double log_power = 0;
    double threshold = 0;
    bool null = false;
    bool pass = false;
};

struct RmtReport {
    std::vector<RmtRow> rows;
    std::vector<RmtTerm> terms;
    unsigned bits = 0;

    bool passed() const
    {
        return std::all_of(terms.begin(), terms.end(), [](const RmtTerm& t) { return t.pass; });
    }
};

/// Quadrature values keyed by abscissa; valid for one (f, bits) pair.
using RmtIntegralCache = std::map<double, HpComplex>;

struct RmtVerifyOptions {
    double tolerance = 0.35;
    std::size_t window_samples = 16;
    double osc_scale = 2;
    QuadratureOptions quadrature;
    /// Reused across calls with the same f and bits when set.
    RmtIntegralCache* cache = nullptr;
};

/// Geometric grid of `points` abscissae from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t points)
{
    if (points < 2 || !(lo > 0) || !(hi > lo)) throw Error(ErrorKind::DomainError, "bad grid bounds");
    std::vector<double> g;
    for (std::size_t k = 0; k < points; ++k) g.push_back(k + 1 == points ? hi : lo * std::pow(hi / lo, double(k) / double(points - 1)));
    return g;
}

/// Checks each truncation of `s` against quadrature values of I.
inline RmtReport rmt_verify(const BoundaryData& f, const VAsymptoticSeries& s, const std::vector<double>& xs, unsigned bits,
                            const RmtVerifyOptions& opt = {})
{
    if (xs.size() < 4) throw Error(ErrorKind::InsufficientData, "grid needs at least 4 points");
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!(xs[k] >= 20)) throw Error(ErrorKind::DomainError, "grid abscissae must be >= 20");
        if (k > 0 && !(xs[k] > xs[k - 1])) throw Error(ErrorKind::DomainError, "grid must increase strictly");
    }
    const unsigned wb = bits + kRmtGuardBits;
    WorkingPrecision wp(wb);

    RmtIntegralCache local;
    RmtIntegralCache& cache = opt.cache ? *opt.cache : local;
    auto integral = [&](double x) -> const HpComplex& {
        auto it = cache.find(x);
        if (it == cache.end()) it = cache.emplace(x, rmt_integral_eval(x, f, bits, opt.quadrature)).first;
        return it->second;
    };

    EstimatorConfig cfg;
    cfg.grid = xs;
    cfg.envelope = EnvelopeMode::On;
    cfg.componentwise = true;
    cfg.osc_scale = opt.osc_scale;
    cfg.window_samples = opt.window_samples;
    cfg.precision = wb;
    {
        WorkingPrecision p(64);
        cfg.null_floor = (f.is_zero() ? 1.0 : f.bound().convert_to<double>()) * std::ldexp(1.0, -int(bits - 30));
    }

    RmtReport rep;
    rep.bits = bits;
    for (std::size_t n = 0; n < s.size(); ++n) {
        Expr S = partial_sum(s, n);
        Evaluator residual = [&](const Real& x) { return integral(x.convert_to<double>()) - eval_at(S, x, wb); };
        RmtTerm t;
        t.n = n;
        t.threshold = to_hp(rmt_exponent(n + 1)).convert_to<double>() - opt.tolerance;
        ValEstimate e = estimate_val(residual, cfg);
        t.vhat = e.vhat;
        t.std_error = e.std_error;
        t.log_power = e.log_power;
        t.null = e.null;
        t.pass = e.null || e.vhat >= t.threshold;
        double r = to_hp(s[n].r).convert_to<double>();
        for (double x : xs) {
            HpComplex R = residual(Real(x));
            RmtRow row;
            row.x = x;
            row.abs_I = integral(x).abs().convert_to<double>();
            row.n = n;
            row.scaled_residual = (R.abs() * boost::multiprecision::pow(Real(x), Real(r))).convert_to<double>();
            row.vhat = t.vhat;
            row.pass = t.pass;
            rep.rows.push_back(row);
        }
        rep.terms.push_back(t);
    }
    return rep;
}

inline RmtReport rmt_verify(const BoundaryData& f, std::size_t terms, const std::vector<double>& xs, unsigned bits,
                            const RmtVerifyOptions& opt = {})
{
    return rmt_verify(f, rmt_series(f, terms), xs, bits, opt);
}

inline Json rmt_report_json(const RmtReport& r, int digits = 17)
{
    auto num = [digits](double v) -> Json {
        if (!std::isfinite(v)) return format_double(v, digits);
        return std::stod(format_double(v, digits));
    };
    Json rows = Json::array(), terms = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"x", num(row.x)},
                        {"abs_I", num(row.abs_I)},
                        {"n", row.n},
                        {"scaled_residual", num(row.scaled_residual)},
                        {"vhat", num(row.vhat)},
                        {"pass", row.pass}});
    for (const auto& t : r.terms)
        terms.push_back({{"n", t.n},
                         {"vhat", num(t.vhat)},
                         {"std_error", num(t.std_error)},
                         {"log_power", num(t.log_power)},
                         {"threshold", num(t.threshold)},
                         {"null", t.null},
                         {"pass", t.pass}});
    return {{"bits", r.bits}, {"rows", rows}, {"terms", terms}, {"passed", r.passed()}};
}

inline std::string rmt_report_table(const RmtReport& r, int digits = 17)
{
    std::vector<std::vector<std::string>> cells{{"x", "n", "scaled_residual", "vhat", "pass"}};
    for (const auto& row : r.rows)
        cells.push_back({format_double(row.x, digits), std::to_string(row.n), format_double(row.scaled_residual, digits),
                         format_double(row.vhat, digits), row.pass ? "PASS" : "FAIL"});
    std::vector<std::size_t> width(5, 0);
    for (const auto& c : cells)
        for (std::size_t k = 0; k < 5; ++k) width[k] = std::max(width[k], c[k].size());
    std::ostringstream out;
    for (const auto& c : cells) {
        for (std::size_t k = 0; k < 5; ++k) out << (k ? "  " : "") << std::setw(int(width[k])) << c[k];
        out << '\n';
    }
    return out.str();
}

} // namespace vasym
