#pragma once

// Numeric v-asymptotic expansion of a sampled or black-box function against an
// explicit basis of v-constants. Exponents are found greedily (estimate, then
// snap to a lattice); coefficients come from one joint least-squares fit of
// every term found so far, carried out at MPFR precision.

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vasym/error.hpp"
#include "vasym/estimator.hpp"
#include "vasym/expr.hpp"
#include "vasym/hp.hpp"
#include "vasym/parse.hpp"
#include "vasym/series.hpp"
#include "vasym/vspace.hpp"

namespace vasym {

/// Exponent lattice {k * step + offset}. An empty step means no snapping.
struct Lattice {
    std::optional<Rational> step = Rational(1, 4);
    std::vector<ExponentValue> offsets{ExponentValue(0), ExponentValue(Rational(0), Rational(0), Rational(1)),
                                       ExponentValue(Rational(0), Rational(1), Rational(0))};

    static Lattice unrounded() { return Lattice{std::nullopt, {}}; }

    /// "none", "STEP" or "STEP;OFFSET,OFFSET,..." where offsets are constants
    /// such as 0, pi or 1/2 + pi^2.
    static Lattice parse(const std::string& spec)
    {
        if (spec == "none") return unrounded();
        Lattice l;
        auto semi = spec.find(';');
        l.step = parse_rational(spec.substr(0, semi));
        if (*l.step <= 0) throw Error(ErrorKind::DomainError, "lattice step must be positive");
        if (semi == std::string::npos) return l;
        l.offsets.clear();
        std::istringstream in(spec.substr(semi + 1));
        std::string item;
        while (std::getline(in, item, ',')) {
            Expr e = parse_expr(item);
            Scalar s;
            if (!e.is_zero()) {
                if (e.has_null_part() || e.size() != 1 || !e.terms().begin()->first.is_constant())
                    throw Error(ErrorKind::Syntax, "lattice offset '" + item + "' is not a constant");
                s = e.terms().begin()->second;
            }
            if (!s.is_real() || s.degree() > 2) throw Error(ErrorKind::Syntax, "lattice offsets must be real, of degree <= 2 in pi");
            auto c = [&](int k) { return k <= s.degree() ? s.coeffs()[k].re() : Rational(0); };
            l.offsets.emplace_back(c(0), c(1), c(2));
        }
        if (l.offsets.empty()) l.offsets.emplace_back(0);
        return l;
    }
};

struct ExpandConfig {
    std::size_t max_terms = 8;
    double gap = 0.25;
    /// Allowed shortfall of the estimated residual valuation against r + gap.
    double gap_slack = 0.1;
    double cond_max = 1e8;
    Lattice lattice;
    /// The first exponent is searched in [r_hat - width, r_hat + width], later
    /// ones in (r_last, max(r_hat, r_last) + width].
    double search_width = 2;
    std::size_t max_candidates = 64;
    std::size_t refit_candidates = 3; // refit at full precision after the double-precision ranking
    /// Relative residual below which the remainder counts as null; 0 picks a
    /// default from the data precision.
    double null_tolerance = 0;
    /// Fitted coefficients smaller than this (relative to the term) are dropped.
    double zero_tolerance = 1e-9;
    /// Relative tolerance for turning coefficients into rationals; 0 picks
    /// 1e-10 for sampled data and 1e-15 otherwise.
    double rationalize_tolerance = 0;
    EstimatorConfig estimator;
};

struct ExpandTermReport {
    double rhat = 0;
    ExponentValue r;
    /// Estimated valuation of f minus the partial sum through this term.
    double residual_vhat = 0;
    bool residual_null = false;
    std::vector<std::complex<double>> coefficients;
};

struct ExpandDiagnostics {
    bool null = false;
    double basis_condition = 0;
    double joint_condition = 0;
    double residual_norm = 0;
    std::size_t samples = 0;
    std::vector<ExpandTermReport> terms;
};

struct NumericExpansion {
    VAsymptoticSeries series;
    ExpandDiagnostics diagnostics;
};

/// Continued-fraction approximation within tol.
inline Rational rationalize(const Real& v, const Real& tol)
{
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    Real x = v;
    Rational best = 0;
    for (int it = 0; it < 200; ++it) {
        Integer a;
        Real fl = boost::multiprecision::floor(x);
        mpfr_get_z(a.backend().data(), fl.backend().data(), MPFR_RNDD);
        Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
        best = Rational(h2, k2);
        if (boost::multiprecision::abs(to_hp(best) - v) <= tol) break;
        Real frac = x - fl;
        if (frac == 0) break;
        x = 1 / frac;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    return best;
}

namespace detail {

using HpMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using HpVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

struct Samples {
    std::vector<double> x;
    std::vector<HpComplex> f;
};

struct JointFit {
    std::vector<std::vector<HpComplex>> coeffs; // [term][basis]
    std::vector<HpComplex> residual;
    double weighted_norm = 0;
    double condition = 0;
};

/// Condition number of the Gram matrix of unit-normalized columns.
inline double gram_condition(const std::vector<std::vector<HpComplex>>& cols)
{
    const std::size_t k = cols.size();
    if (k == 0) return 1;
    const std::size_t n = cols[0].size();
    Eigen::MatrixXcd a(n, k);
    for (std::size_t c = 0; c < k; ++c) {
        Real norm = 0;
        for (const auto& z : cols[c]) norm += z.norm();
        norm = boost::multiprecision::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) {
            HpComplex z = norm > 0 ? cols[c][r] * Real(1 / norm) : HpComplex();
            a(r, c) = z.to_complex();
        }
    }
    Eigen::MatrixXcd g = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

class Fitter {
public:
    Fitter(const Samples& s, const BasisSpan& basis, unsigned bits) : s_(s), bits_(bits)
    {
        for (const auto& b : basis.basis()) {
            std::vector<HpComplex> col;
            for (double x : s_.x) col.push_back(eval_at(b, Real(x), bits));
            basis_values_.push_back(std::move(col));
        }
    }

    const std::vector<std::vector<HpComplex>>& basis_values() const { return basis_values_; }

    /// Least squares of w*f against w * x^-r_n * b over all samples, with w = x^weight.
    JointFit fit(const std::vector<ExponentValue>& exps, double weight) const
    {
        const std::size_t m = s_.x.size(), nb = basis_values_.size(), k = exps.size() * nb;
        const std::vector<Real>& w = weights(weight);
        std::vector<std::vector<HpComplex>> cols = columns(exps, weight);
        JointFit out;

        // complex least squares as a real one: [Re A, -Im A; Im A, Re A]
        std::vector<Real> scale(k);
        for (std::size_t c = 0; c < k; ++c) {
            Real n2 = 0;
            for (const auto& z : cols[c]) n2 += z.norm();
            scale[c] = n2 > 0 ? Real(1 / boost::multiprecision::sqrt(n2)) : Real(1);
        }
        HpMatrix a(2 * m, 2 * k);
        HpVector y(2 * m);
        for (std::size_t j = 0; j < m; ++j) {
            HpComplex wf = s_.f[j] * w[j];
            y(j) = wf.re;
            y(m + j) = wf.im;
            for (std::size_t c = 0; c < k; ++c) {
                const HpComplex& z = cols[c][j];
                a(j, c) = z.re * scale[c];
                a(j, k + c) = -z.im * scale[c];
                a(m + j, c) = z.im * scale[c];
                a(m + j, k + c) = z.re * scale[c];
            }
        }
        HpVector sol = k ? HpVector(a.colPivHouseholderQr().solve(y)) : HpVector(0);

        out.coeffs.assign(exps.size(), std::vector<HpComplex>(nb));
        for (std::size_t t = 0; t < exps.size(); ++t)
            for (std::size_t b = 0; b < nb; ++b) {
                std::size_t c = t * nb + b;
                out.coeffs[t][b] = HpComplex(Real(sol(c) * scale[c]), Real(sol(k + c) * scale[c]));
            }
        out.residual = residual(exps, out.coeffs, exps.size());
        Real norm = 0;
        for (std::size_t j = 0; j < m; ++j) norm += (out.residual[j] * w[j]).norm();
        out.weighted_norm = boost::multiprecision::sqrt(norm).convert_to<double>();
        return out;
    }

    /// f minus the first `upto` fitted terms, at each sample.
    std::vector<HpComplex> residual(const std::vector<ExponentValue>& exps, const std::vector<std::vector<HpComplex>>& coeffs,
                                    std::size_t upto) const
    {
        std::vector<HpComplex> r = s_.f;
        for (std::size_t t = 0; t < upto; ++t) {
            const std::vector<Real>& p = powers(exps[t]);
            for (std::size_t j = 0; j < r.size(); ++j) {
                HpComplex term;
                for (std::size_t b = 0; b < basis_values_.size(); ++b) term += coeffs[t][b] * basis_values_[b][j];
                r[j] -= term * p[j];
            }
        }
        return r;
    }

    /// Weighted residual norm of the same fit in double precision, for ranking candidates.
    double screen(const std::vector<ExponentValue>& exps, double weight) const
    {
        const std::size_t m = s_.x.size(), nb = basis_values_.size();
        const auto rows = Eigen::Index(m);
        if (basis_d_.empty()) {
            f_d_.resize(rows);
            for (std::size_t j = 0; j < m; ++j) f_d_(Eigen::Index(j)) = s_.f[j].to_complex();
            for (const auto& bv : basis_values_) {
                Eigen::VectorXcd v(rows);
                for (std::size_t j = 0; j < m; ++j) v(Eigen::Index(j)) = bv[j].to_complex();
                basis_d_.push_back(std::move(v));
            }
        }
        Eigen::VectorXd w(rows);
        for (std::size_t j = 0; j < m; ++j) w(Eigen::Index(j)) = std::pow(s_.x[j], weight);
        Eigen::MatrixXcd a(rows, Eigen::Index(exps.size() * nb));
        Eigen::Index c = 0;
        for (const auto& r : exps) {
            double rd = to_hp(r).convert_to<double>();
            for (const auto& bv : basis_d_) {
                for (std::size_t j = 0; j < m; ++j)
                    a(Eigen::Index(j), c) = bv(Eigen::Index(j)) * (w(Eigen::Index(j)) * std::pow(s_.x[j], -rd));
                double n = a.col(c).norm();
                if (n > 0) a.col(c) /= n;
                ++c;
            }
        }
        Eigen::VectorXcd y = f_d_.cwiseProduct(w.cast<std::complex<double>>());
        if (a.cols() == 0) return y.norm();
        Eigen::VectorXcd sol = a.colPivHouseholderQr().solve(y);
        return (y - a * sol).norm();
    }

    /// Weighted design columns w * x^-r_n * b, term-major.
    std::vector<std::vector<HpComplex>> columns(const std::vector<ExponentValue>& exps, double weight) const
    {
        const std::vector<Real>& w = weights(weight);
        std::vector<std::vector<HpComplex>> cols;
        for (const auto& r : exps) {
            const std::vector<Real>& p = powers(r);
            for (const auto& bv : basis_values_) {
                std::vector<HpComplex> col(s_.x.size());
                for (std::size_t j = 0; j < col.size(); ++j) col[j] = bv[j] * Real(w[j] * p[j]);
                cols.push_back(std::move(col));
            }
        }
        return cols;
    }

    /// x^weight at each sample.
    const std::vector<Real>& weights(double weight) const
    {
        auto it = weights_.find(weight);
        if (it != weights_.end()) return it->second;
        std::vector<Real> w;
        for (double x : s_.x) w.push_back(boost::multiprecision::pow(Real(x), Real(weight)));
        return weights_.emplace(weight, std::move(w)).first->second;
    }

private:
    const std::vector<Real>& powers(const ExponentValue& r) const
    {
        auto it = powers_.find(r);
        if (it != powers_.end()) return it->second;
        Real rr = to_hp(r);
        std::vector<Real> p;
        for (double x : s_.x) p.push_back(boost::multiprecision::pow(Real(x), -rr));
        return powers_.emplace(r, std::move(p)).first->second;
    }

    const Samples& s_;
    unsigned bits_;
    std::vector<std::vector<HpComplex>> basis_values_;
    mutable std::map<ExponentValue, std::vector<Real>> powers_;
    mutable std::map<double, std::vector<Real>> weights_;
    mutable std::vector<Eigen::VectorXcd> basis_d_;
    mutable Eigen::VectorXcd f_d_;
};

/// Null when every weighted residual is tiny against the weighted data.
inline bool negligible(const Samples& s, const std::vector<HpComplex>& r, const std::vector<Real>& weights, double tol)
{
    Real top = 0, res = 0;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        const Real& w = weights[j];
        top = boost::multiprecision::max(top, Real(s.f[j].abs() * w));
        res = boost::multiprecision::max(res, Real(r[j].abs() * w));
    }
    return res <= top * Real(tol);
}

/// Lattice points above `last` in [lo, hi], nearest to rhat first.
inline std::vector<ExponentValue> candidates(const Lattice& lat, double rhat, double lo, double hi,
                                             const std::optional<ExponentValue>& last, std::size_t limit)
{
    std::vector<std::pair<double, ExponentValue>> out;
    auto admit = [&](const ExponentValue& c) {
        if (last && !(*last < c)) return;
        double d = to_hp(c).convert_to<double>();
        if (d < lo || d > hi) return;
        for (const auto& [dd, e] : out)
            if (e == c) return;
        out.emplace_back(std::abs(d - rhat), c);
    };
    if (!lat.step) {
        WorkingPrecision wp(64);
        admit(ExponentValue(rationalize(Real(rhat), Real(1e-6))));
    } else {
        double step = lat.step->convert_to<double>();
        for (const auto& o : lat.offsets) {
            double od = to_hp(o).convert_to<double>();
            long k0 = long(std::floor((lo - od) / step)), k1 = long(std::ceil((hi - od) / step));
            for (long k = k0; k <= k1; ++k) admit(o + ExponentValue(*lat.step * Rational(k)));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ExponentValue> r;
    for (std::size_t k = 0; k < out.size() && k < limit; ++k) r.push_back(out[k].second);
    return r;
}

/// Sample abscissae of the estimator in evaluator mode.
inline std::vector<double> evaluator_abscissae(const EstimatorConfig& cfg)
{
    std::vector<double> xs;
    std::size_t m = cfg.envelope != EnvelopeMode::Off ? std::max<std::size_t>(cfg.window_samples, 2) : 1;
    for (double xk : estimator_grid(cfg))
        for (std::size_t j = 0; j < m; ++j) xs.push_back(m == 1 ? xk : xk + 2 * cfg.osc_scale * double(j) / double(m - 1));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

inline NumericExpansion numeric_expand_samples(const Samples& s, const BasisSpan& basis, const ExpandConfig& cfg, bool sampled)
{
    const unsigned bits = cfg.estimator.precision;
    WorkingPrecision wp(bits);
    NumericExpansion out;
    out.diagnostics.samples = s.x.size();

    auto vhat = [&](const std::vector<HpComplex>& r) {
        if (sampled) {
            SampledFunction sf;
            for (std::size_t j = 0; j < s.x.size(); ++j) sf.push_back(s.x[j], r[j].to_complex());
            return estimate_val(sf, cfg.estimator);
        }
        std::map<double, const HpComplex*> at;
        for (std::size_t j = 0; j < s.x.size(); ++j) at[s.x[j]] = &r[j];
        Evaluator ev = [&](const Real& x) {
            auto it = at.find(x.convert_to<double>());
            if (it == at.end()) throw Error(ErrorKind::InvariantViolation, "estimator asked for an unsampled abscissa");
            return *it->second;
        };
        return estimate_val(ev, cfg.estimator);
    };

    bool all_zero = std::all_of(s.f.begin(), s.f.end(), [](const HpComplex& z) { return z.is_zero(); });
    if (all_zero) {
        out.diagnostics.null = true;
        return out;
    }
    const double null_tol = cfg.null_tolerance > 0 ? cfg.null_tolerance : sampled ? 1e-12 : std::ldexp(1.0, -int(bits) + 32);
    const double rat_tol = cfg.rationalize_tolerance > 0 ? cfg.rationalize_tolerance : sampled ? 1e-10 : 1e-15;

    Fitter fitter(s, basis, bits);
    out.diagnostics.basis_condition = gram_condition(fitter.basis_values());
    if (!(out.diagnostics.basis_condition <= cfg.cond_max))
        throw Error(ErrorKind::IllConditioned,
                    "basis Gram matrix condition number " + format_double(out.diagnostics.basis_condition, 6) + " exceeds " + format_double(cfg.cond_max, 6));

    std::vector<ExponentValue> exps;
    std::vector<double> rhats;
    std::vector<HpComplex> residual = s.f;
    JointFit fit;
    bool null_tail = false;
    double weight = 0;
    while (exps.size() < cfg.max_terms) {
        ValEstimate e = vhat(residual);
        if (e.null) {
            null_tail = true;
            break;
        }
        double rhat = e.vhat;
        if (exps.empty()) weight = rhat;
        // after the first term the residual still carries fitting leakage, so
        // the search starts at the previous exponent rather than at rhat
        std::optional<ExponentValue> last;
        double lo = rhat - cfg.search_width, hi = rhat + cfg.search_width;
        if (!exps.empty()) {
            last = exps.back();
            double l = to_hp(*last).convert_to<double>();
            lo = l;
            hi = std::max(rhat, l) + cfg.search_width;
        }
        auto cands = candidates(cfg.lattice, rhat, lo, hi, last, cfg.max_candidates);
        if (cands.empty())
            throw Error(ErrorKind::NoValuationGap, "no admissible exponent near the estimated valuation " + format_double(rhat, 6));
        // rank in double precision, then refit the front runners exactly
        std::vector<std::pair<double, ExponentValue>> ranked;
        for (const auto& c : cands) {
            auto trial = exps;
            trial.push_back(c);
            ranked.emplace_back(fitter.screen(trial, weight), c);
        }
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        ranked.resize(std::min(ranked.size(), cfg.refit_candidates));
        std::optional<JointFit> best;
        ExponentValue best_c;
        for (const auto& [score, c] : ranked) {
            auto trial = exps;
            trial.push_back(c);
            JointFit f = fitter.fit(trial, weight);
            if (!best || f.weighted_norm < best->weighted_norm) {
                best = std::move(f);
                best_c = c;
            }
        }
        exps.push_back(best_c);
        rhats.push_back(rhat);
        fit = std::move(*best);
        fit.condition = gram_condition(fitter.columns(exps, weight));
        residual = fit.residual;
        if (negligible(s, residual, fitter.weights(weight), null_tol)) {
            null_tail = true;
            break;
        }
    }
    out.diagnostics.joint_condition = fit.condition;
    out.diagnostics.residual_norm = fit.weighted_norm;

    // each partial sum of the joint fit must leave a residual of higher valuation
    std::vector<SeriesTerm> terms;
    for (std::size_t t = 0; t < exps.size(); ++t) {
        ExpandTermReport rep;
        rep.rhat = rhats[t];
        rep.r = exps[t];
        std::vector<HpComplex> r = fitter.residual(exps, fit.coeffs, t + 1);
        double need = to_hp(exps[t]).convert_to<double>() + cfg.gap - cfg.gap_slack;
        if ((t + 1 == exps.size() && null_tail) || negligible(s, r, fitter.weights(weight), null_tol)) {
            rep.residual_null = true;
            rep.residual_vhat = std::numeric_limits<double>::infinity();
        } else {
            ValEstimate e = vhat(r);
            rep.residual_null = e.null;
            rep.residual_vhat = e.null ? std::numeric_limits<double>::infinity() : e.vhat;
        }
        Real big = 0;
        for (const auto& c : fit.coeffs[t]) big = boost::multiprecision::max(big, c.abs());
        Expr phi;
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const HpComplex& c = fit.coeffs[t][b];
            rep.coefficients.push_back(c.to_complex());
            auto part = [&](const Real& v) {
                if (boost::multiprecision::abs(v) <= big * Real(cfg.zero_tolerance)) return Rational(0);
                return rationalize(v, boost::multiprecision::abs(v) * Real(rat_tol));
            };
            ComplexRational q(part(c.re), part(c.im));
            if (!q.is_zero()) phi += basis.basis()[b] * Scalar(q);
        }
        out.diagnostics.terms.push_back(rep);
        if (!(rep.residual_vhat >= need))
            throw Error(ErrorKind::NoValuationGap, "residual after the term at r = " + to_string(exps[t]) + " has estimated valuation "
                                                       + format_double(rep.residual_vhat, 6) + " (need " + format_double(need, 6)
                                                       + "); best r-hat " + format_double(rhats[t], 6) + "; the basis is likely incomplete");
        terms.push_back({exps[t], phi});
    }
    out.series = VAsymptoticSeries(std::move(terms), false);
    return out;
}

} // namespace detail

inline NumericExpansion numeric_expand(const Evaluator& f, const BasisSpan& basis, const ExpandConfig& cfg = {})
{
    WorkingPrecision wp(cfg.estimator.precision);
    detail::Samples s;
    s.x = detail::evaluator_abscissae(cfg.estimator);
    for (double x : s.x) {
        if (!(x > 0)) throw Error(ErrorKind::DomainError, "grid abscissae must be positive");
        s.f.push_back(f(Real(x)));
    }
    return detail::numeric_expand_samples(s, basis, cfg, false);
}

inline NumericExpansion numeric_expand(const SampledFunction& f, const BasisSpan& basis, const ExpandConfig& cfg = {})
{
    WorkingPrecision wp(cfg.estimator.precision);
    detail::Samples s;
    for (std::size_t k = 0; k < f.size(); ++k) {
        s.x.push_back(f.x[k]);
        s.f.emplace_back(Real(f.value[k].real()), Real(f.value[k].imag()));
    }
    return detail::numeric_expand_samples(s, basis, cfg, true);
}

} // namespace vasym
