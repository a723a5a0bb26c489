#pragma once

// Numerical valuation estimate for sampled or black-box germs: a regression
// of log|f| against log x (optionally with a log log x regressor) on a
// sliding-window envelope of |f|.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vasym/expr.hpp"

namespace vasym {

/// Samples (x, f(x)) with strictly increasing positive x.
struct SampledFunction {
    std::vector<double> x;
    std::vector<std::complex<double>> value;
    std::string label;

    std::size_t size() const noexcept { return x.size(); }
    void push_back(double xv, std::complex<double> fv)
    {
        x.push_back(xv);
        value.push_back(fv);
    }
};

/// Reads the `x,re,im` CSV format.
inline SampledFunction read_csv(std::istream& in, std::string label = {})
{
    SampledFunction s;
    s.label = std::move(label);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            std::string h;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) h += c;
            if (h != "x,re,im") throw Error(ErrorKind::Io, "expected header 'x,re,im', got '" + line + "'");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell[3];
        for (int k = 0; k < 3; ++k)
            if (!std::getline(ss, cell[k], ',')) throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": expected 3 fields");
        try {
            std::size_t used = 0;
            double v[3];
            for (int k = 0; k < 3; ++k) {
                v[k] = std::stod(cell[k], &used);
                if (cell[k].find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
            }
            s.push_back(v[0], {v[1], v[2]});
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (!header_seen) throw Error(ErrorKind::Io, "empty CSV input");
    return s;
}

inline SampledFunction read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_csv(in, path);
}

inline void write_csv(std::ostream& out, const SampledFunction& s)
{
    out << "x,re,im\n";
    out.precision(17);
    for (std::size_t k = 0; k < s.size(); ++k) out << s.x[k] << ',' << s.value[k].real() << ',' << s.value[k].imag() << '\n';
}

enum class EnvelopeMode { Auto, On, Off };

struct EstimatorConfig {
    EnvelopeMode envelope = EnvelopeMode::Auto;
    /// Fit log|f| = -v log x + p log log x + c instead of a pure power law.
    bool log_aware = true;
    /// Oscillation length; envelope windows cover twice this.
    double osc_scale = 2 * std::numbers::pi;
    std::size_t window_samples = 16;
    std::size_t detrend_iterations = 2;
    /// Geometric grid x0 * growth^k, k < points (ignored when `grid` is set).
    double x0 = 1e3;
    double growth = 2;
    std::size_t points = 16;
    std::vector<double> grid;
    /// v = min(v(Re f), v(Im f)); components never exceeding null_floor in
    /// magnitude count as null.
    bool componentwise = false;
    double null_floor = 0;
    double tolerance = 0.1;
    unsigned precision = 128;
};

struct ValEstimate {
    double vhat = 0;
    double std_error = 0;
    std::pair<double, double> window{0, 0};
    bool envelope_used = false;
    /// Fitted exponent of log x (0 for a pure power fit).
    double log_power = 0;
    bool possibly_not_moderate = false;
    std::size_t points_used = 0;
    /// Every component was null (componentwise mode).
    bool null = false;
};

using Evaluator = std::function<HpComplex(const Real&)>;

namespace detail {

struct Obs {
    double x;
    double log_abs; ///< -inf for zero
    int sign_re;
    int sign_im;
};

struct Window {
    double x_ref;
    std::vector<Obs> obs;
};

inline int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

inline bool has_sign_changes(const std::vector<Window>& ws)
{
    auto flips = [](const std::vector<int>& s) {
        int last = 0;
        for (int v : s) {
            if (v == 0) continue;
            if (last != 0 && v != last) return true;
            last = v;
        }
        return false;
    };
    std::vector<int> re, im;
    for (const auto& w : ws)
        for (const auto& o : w.obs) {
            re.push_back(o.sign_re);
            im.push_back(o.sign_im);
        }
    return flips(re) || flips(im);
}

struct Fit {
    double v = 0, p = 0, c = 0, se = 0;
};

inline Fit regress(const std::vector<double>& xs, const std::vector<double>& ys, bool log_aware)
{
    const std::size_t n = xs.size();
    const int k = log_aware ? 3 : 2;
    Eigen::MatrixXd X(n, k);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(xs[i]);
        X(i, 0) = 1.0;
        X(i, 1) = -lx;
        if (log_aware) X(i, 2) = std::log(lx);
        y(i) = ys[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd r = y - X * beta;
    Fit f;
    f.c = beta(0);
    f.v = beta(1);
    if (log_aware) f.p = beta(2);
    double dof = double(n) - k;
    if (dof > 0) {
        double sigma2 = r.squaredNorm() / dof;
        Eigen::MatrixXd cov = (X.transpose() * X).inverse() * sigma2;
        f.se = std::sqrt(std::max(0.0, cov(1, 1)));
    }
    return f;
}

/// Envelope point per window: max over its samples of log|f(x_j)| + v ln(x_j / x_ref).
inline void envelope(const std::vector<Window>& ws, double v, std::vector<double>& xs, std::vector<double>& ys)
{
    xs.clear();
    ys.clear();
    for (const auto& w : ws) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& o : w.obs)
            if (std::isfinite(o.log_abs)) best = std::max(best, o.log_abs + v * std::log(o.x / w.x_ref));
        if (std::isfinite(best)) {
            xs.push_back(w.x_ref);
            ys.push_back(best);
        }
    }
}

inline bool accelerating_growth(const std::vector<double>& xs, const std::vector<double>& ys)
{
    std::size_t h = xs.size() / 2;
    if (h < 2) return false;
    auto slope = [&](std::size_t lo, std::size_t hi) {
        std::vector<double> a(xs.begin() + lo, xs.begin() + hi), b(ys.begin() + lo, ys.begin() + hi);
        return -regress(a, b, false).v;
    };
    double s1 = slope(0, h), s2 = slope(h, xs.size());
    return s2 > 2.0 && s2 > 1.5 * std::max(s1, 1.0);
}

inline ValEstimate estimate_windows(const std::vector<Window>& ws, bool use_envelope, const EstimatorConfig& cfg)
{
    std::size_t usable = 0, total = 0;
    for (const auto& w : ws)
        for (const auto& o : w.obs) {
            ++total;
            if (std::isfinite(o.log_abs)) ++usable;
        }
    if (usable == 0) throw Error(ErrorKind::NullCandidate, "all samples are zero; the germ may be null");
    if (usable < 8) throw Error(ErrorKind::InsufficientData, "only " + std::to_string(usable) + " usable samples (need 8)");

    std::vector<Window> eff;
    if (use_envelope) {
        eff = ws;
    } else {
        for (const auto& w : ws)
            for (const auto& o : w.obs) eff.push_back({o.x, {o}});
    }
    std::vector<double> xs, ys;
    envelope(eff, 0.0, xs, ys);
    std::size_t need = cfg.log_aware ? 4 : 3;
    if (xs.size() < need) throw Error(ErrorKind::InsufficientData, "too few envelope points for the regression");
    Fit fit = regress(xs, ys, cfg.log_aware);
    if (use_envelope) {
        for (std::size_t it = 0; it < cfg.detrend_iterations; ++it) {
            envelope(eff, fit.v, xs, ys);
            fit = regress(xs, ys, cfg.log_aware);
        }
    }
    ValEstimate e;
    e.vhat = fit.v;
    e.std_error = fit.se;
    e.log_power = fit.p;
    e.window = {xs.front(), xs.back()};
    e.envelope_used = use_envelope;
    e.points_used = usable;
    e.possibly_not_moderate = accelerating_growth(xs, ys);
    return e;
}

enum class Part { Abs, Re, Im };

/// Re-derives log magnitudes for one component, applying the null floor.
inline std::vector<Window> select(const std::vector<Window>& ws, const std::vector<std::vector<std::pair<double, double>>>& parts,
                                  Part which, double floor_log)
{
    std::vector<Window> out = ws;
    for (std::size_t w = 0; w < ws.size(); ++w)
        for (std::size_t j = 0; j < ws[w].obs.size(); ++j) {
            double l = which == Part::Abs ? ws[w].obs[j].log_abs
                     : which == Part::Re  ? parts[w][j].first
                                          : parts[w][j].second;
            out[w].obs[j].log_abs = l > floor_log ? l : -std::numeric_limits<double>::infinity();
        }
    return out;
}

inline ValEstimate estimate_collected(const std::vector<Window>& ws,
                                      const std::vector<std::vector<std::pair<double, double>>>& parts,
                                      const EstimatorConfig& cfg)
{
    bool env = cfg.envelope == EnvelopeMode::On || (cfg.envelope == EnvelopeMode::Auto && has_sign_changes(ws));
    double floor_log = cfg.null_floor > 0 ? std::log(cfg.null_floor) : -std::numeric_limits<double>::infinity();
    if (!cfg.componentwise) return estimate_windows(select(ws, parts, Part::Abs, floor_log), env, cfg);
    ValEstimate best;
    bool found = false;
    for (Part p : {Part::Re, Part::Im}) {
        try {
            ValEstimate e = estimate_windows(select(ws, parts, p, floor_log), env, cfg);
            if (!found || e.vhat < best.vhat) best = e;
            found = true;
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::NullCandidate) throw;
        }
    }
    if (!found) {
        ValEstimate e;
        e.vhat = std::numeric_limits<double>::infinity();
        e.null = true;
        e.envelope_used = env;
        return e;
    }
    return best;
}

inline double log_abs_double(double v)
{
    return v == 0 || !std::isfinite(v) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v));
}

} // namespace detail

inline std::vector<double> estimator_grid(const EstimatorConfig& cfg)
{
    if (!cfg.grid.empty()) return cfg.grid;
    std::vector<double> g;
    double x = cfg.x0;
    for (std::size_t k = 0; k < cfg.points; ++k, x *= cfg.growth) g.push_back(x);
    return g;
}

/// Estimate from stored samples. Windows are runs of consecutive samples
/// spanning at least two oscillation lengths and holding at least 8 points.
inline ValEstimate estimate_val(const SampledFunction& f, const EstimatorConfig& cfg = {})
{
    if (f.x.size() != f.value.size()) throw Error(ErrorKind::InvariantViolation, "x and value lengths differ");
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!(f.x[k] > 0)) throw Error(ErrorKind::DomainError, "sample abscissae must be positive");
        if (k > 0 && !(f.x[k] > f.x[k - 1])) throw Error(ErrorKind::DomainError, "sample abscissae must increase strictly");
    }
    if (f.size() < 8) throw Error(ErrorKind::InsufficientData, "need at least 8 samples");
    if (f.x.back() / f.x.front() < 100) throw Error(ErrorKind::InsufficientData, "samples must span at least 2 decades of x");

    std::vector<detail::Window> singles;
    std::vector<std::vector<std::pair<double, double>>> parts_single;
    for (std::size_t k = 0; k < f.size(); ++k) {
        auto z = f.value[k];
        double la = std::isfinite(std::abs(z)) ? detail::log_abs_double(std::abs(z)) : -std::numeric_limits<double>::infinity();
        singles.push_back({f.x[k], {{f.x[k], la, detail::sign_of(z.real()), detail::sign_of(z.imag())}}});
        parts_single.push_back({{detail::log_abs_double(z.real()), detail::log_abs_double(z.imag())}});
    }
    bool env = cfg.envelope == EnvelopeMode::On || (cfg.envelope == EnvelopeMode::Auto && detail::has_sign_changes(singles));
    if (!env) {
        EstimatorConfig c = cfg;
        c.envelope = EnvelopeMode::Off;
        return detail::estimate_collected(singles, parts_single, c);
    }
    std::vector<detail::Window> blocks;
    std::vector<std::vector<std::pair<double, double>>> parts;
    for (std::size_t k = 0; k < f.size();) {
        detail::Window w{f.x[k], {}};
        std::vector<std::pair<double, double>> p;
        std::size_t j = k;
        while (j < f.size() && (w.obs.size() < 8 || f.x[j] - f.x[k] < 2 * cfg.osc_scale)) {
            w.obs.push_back(singles[j].obs[0]);
            p.push_back(parts_single[j][0]);
            ++j;
        }
        if (w.obs.size() >= 8 || blocks.empty()) {
            blocks.push_back(std::move(w));
            parts.push_back(std::move(p));
        } else {
            // short tail joins the previous block
            for (auto& o : w.obs) blocks.back().obs.push_back(o);
            for (auto& q : p) parts.back().push_back(q);
        }
        k = j;
    }
    EstimatorConfig c = cfg;
    c.envelope = EnvelopeMode::On;
    return detail::estimate_collected(blocks, parts, c);
}

/// Estimate from a black-box evaluator on the configured grid; with the
/// envelope each grid point x_k carries window_samples points spread over
/// [x_k, x_k + 2 osc_scale].
inline ValEstimate estimate_val(const Evaluator& f, const EstimatorConfig& cfg = {})
{
    std::vector<double> grid = estimator_grid(cfg);
    for (double x : grid)
        if (!(x > 0)) throw Error(ErrorKind::DomainError, "grid abscissae must be positive");
    if (grid.size() < 4) throw Error(ErrorKind::InsufficientData, "grid needs at least 4 points");
    WorkingPrecision wp(cfg.precision);
    std::vector<detail::Window> ws;
    std::vector<std::vector<std::pair<double, double>>> parts;
    bool windows = cfg.envelope != EnvelopeMode::Off;
    std::size_t m = windows ? std::max<std::size_t>(cfg.window_samples, 2) : 1;
    for (double xk : grid) {
        detail::Window w{xk, {}};
        std::vector<std::pair<double, double>> p;
        for (std::size_t j = 0; j < m; ++j) {
            double xj = m == 1 ? xk : xk + 2 * cfg.osc_scale * double(j) / double(m - 1);
            HpComplex z = f(Real(xj));
            w.obs.push_back({xj, log_abs(z), detail::sign_of(z.re), detail::sign_of(z.im)});
            p.emplace_back(log_abs(z.re), log_abs(z.im));
        }
        ws.push_back(std::move(w));
        parts.push_back(std::move(p));
    }
    if (cfg.envelope == EnvelopeMode::Auto && !detail::has_sign_changes(ws)) {
        // no oscillation seen: regress on the grid points themselves
        for (std::size_t k = 0; k < ws.size(); ++k) {
            ws[k].obs.resize(1);
            parts[k].resize(1);
        }
        EstimatorConfig c = cfg;
        c.envelope = EnvelopeMode::Off;
        return detail::estimate_collected(ws, parts, c);
    }
    EstimatorConfig c = cfg;
    c.envelope = windows ? EnvelopeMode::On : EnvelopeMode::Off;
    return detail::estimate_collected(ws, parts, c);
}

inline ValEstimate estimate_val(const Expr& e, const EstimatorConfig& cfg = {})
{
    unsigned bits = cfg.precision;
    return estimate_val(Evaluator([&e, bits](const Real& x) { return eval_at(e, x, bits); }), cfg);
}

} // namespace vasym
