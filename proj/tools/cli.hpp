#pragma once

// The `vasym` command. run() is the whole program short of process exit, so
// tests can drive it in-process.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vasym/vasym.hpp"

namespace vasym::cli {

inline constexpr int kOk = 0;
inline constexpr int kDomain = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumeric = 3;

inline int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Syntax:
    case ErrorKind::Io: return kUsage;
    case ErrorKind::IllConditioned:
    case ErrorKind::NonConvergent:
    case ErrorKind::PrecisionTooLow:
    case ErrorKind::NoValuationGap:
    case ErrorKind::InsufficientData:
    case ErrorKind::NullCandidate: return kNumeric;
    default: return kDomain;
    }
}

/// Space-aligned columns, first row is the header.
inline std::string table(const std::vector<std::vector<std::string>>& cells)
{
    std::vector<std::size_t> width;
    for (const auto& row : cells) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    }
    std::ostringstream out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) line += "  ";
            // last column left aligned so expressions read naturally
            if (k + 1 == row.size()) line += row[k];
            else line += std::string(width[k] - row[k].size(), ' ') + row[k];
        }
        out << line << '\n';
    }
    return out.str();
}

class Program {
public:
    Program(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv)
    {
        CLI::App app{"v-asymptotic calculus: valuations, expansions, generalized numbers"};
        app.name("vasym");
        app.require_subcommand(1);
        app.fallthrough();
        bool json = false;
        unsigned precision = 0;
        int digits = 0;
        std::string config;
        app.add_flag("--json", json, "JSON output");
        auto* prec_opt = app.add_option("--precision", precision, "working precision in bits")->check(CLI::Range(32u, 100000u));
        auto* digits_opt = app.add_option("--digits", digits, "significant digits of floating output (default 17)")->check(CLI::Range(1, 40));
        app.add_option("--config", config, "key = value settings file")->check(CLI::ExistingFile);

        std::string a, b;
        std::vector<std::string> many;
        std::size_t terms = kDefaultMaxTerms;
        std::string series_file, csv, envelope, lattice = "1/4";
        std::vector<std::string> basis;

        auto* val_cmd = app.add_subcommand("val", "valuation of EXPR");
        val_cmd->add_option("EXPR", a)->required();
        auto* classify_cmd = app.add_subcommand("classify", "Null, VInfinitesimal, VConstant or VInfinitelyLarge");
        classify_cmd->add_option("EXPR", a)->required();
        auto* dist_cmd = app.add_subcommand("dist", "ultrametric distance e^(-v(A - B))");
        dist_cmd->add_option("A", a)->required();
        dist_cmd->add_option("B", b)->required();
        auto* st_cmd = app.add_subcommand("st", "pseudostandard part");
        st_cmd->add_option("EXPR", a)->required();
        auto* indep_cmd = app.add_subcommand("indep", "linear v-independence of the arguments");
        indep_cmd->add_option("EXPR", many)->required();
        auto* expand_cmd = app.add_subcommand("expand", "v-asymptotic expansion");
        expand_cmd->add_option("EXPR", a)->required();
        expand_cmd->add_option("--terms", terms, "maximum number of terms")->check(CLI::PositiveNumber);
        auto* verify_cmd = app.add_subcommand("verify", "check a series document against EXPR");
        verify_cmd->add_option("EXPR", a)->required();
        verify_cmd->add_option("--series", series_file, "SeriesDocument JSON")->required();
        auto* est_cmd = app.add_subcommand("estimate-val", "estimated valuation of sampled data");
        est_cmd->add_option("--csv", csv, "x,re,im samples")->required();
        est_cmd->add_option("--envelope", envelope)->check(CLI::IsMember({"auto", "on", "off"}));
        auto* nexp_cmd = app.add_subcommand("numeric-expand", "expansion of sampled data over a finite basis");
        nexp_cmd->add_option("--csv", csv, "x,re,im samples")->required();
        nexp_cmd->add_option("--basis", basis, "valuation-0 basis elements (1 is always included)");
        nexp_cmd->add_option("--lattice", lattice, "STEP[;OFFSET,...] or none");
        std::size_t numeric_terms = ExpandConfig{}.max_terms;
        nexp_cmd->add_option("--terms", numeric_terms, "maximum number of terms")->check(CLI::PositiveNumber);

        auto* rmt_cmd = app.add_subcommand("rmt", "the integral of exp(ixy - y^2 ln x) f(y) over [-pi, pi]");
        rmt_cmd->require_subcommand(1);
        std::string poly, formula = "exact";
        std::size_t orders = 3, points = 12;
        double xmin = 50, xmax = 400;
        unsigned bits = 256;
        auto rmt_common = [&](CLI::App* c, bool grid, bool series) {
            c->add_option("--poly", poly, "coefficients a0,a1,... of f")->required();
            c->add_option("--bits", bits, "quadrature precision in bits");
            if (grid) {
                c->add_option("--xmin", xmin);
                c->add_option("--xmax", xmax);
                c->add_option("--points", points)->check(CLI::PositiveNumber);
            }
            if (series) {
                c->add_option("--orders", orders, "number of series terms")->check(CLI::PositiveNumber);
                c->add_option("--formula", formula, "exact or top-log")->check(CLI::IsMember({"exact", "top-log"}));
            }
        };
        auto* rmt_eval = rmt_cmd->add_subcommand("eval", "quadrature values as x,re,im");
        rmt_common(rmt_eval, true, false);
        auto* rmt_coeffs = rmt_cmd->add_subcommand("coeffs", "exact series coefficients");
        rmt_common(rmt_coeffs, false, true);
        auto* rmt_verify_cmd = rmt_cmd->add_subcommand("verify", "residual valuations of the truncated series");
        rmt_common(rmt_verify_cmd, true, true);

        auto* gn_cmd = app.add_subcommand("gn", "generalized numbers (classes modulo null germs)");
        gn_cmd->require_subcommand(1);
        auto* gn_rep = gn_cmd->add_subcommand("rep", "class representative");
        gn_rep->add_option("A", a)->required();
        auto* gn_val_cmd = gn_cmd->add_subcommand("val", "valuation of the class");
        gn_val_cmd->add_option("A", a)->required();
        auto* gn_dist_cmd = gn_cmd->add_subcommand("dist", "distance of two classes");
        gn_dist_cmd->add_option("A", a)->required();
        gn_dist_cmd->add_option("B", b)->required();
        auto* gn_eq = gn_cmd->add_subcommand("eq", "equality of two classes");
        gn_eq->add_option("A", a)->required();
        gn_eq->add_option("B", b)->required();
        auto* gn_real = gn_cmd->add_subcommand("real", "whether the class is real");
        gn_real->add_option("A", a)->required();
        auto* gn_expand_cmd = gn_cmd->add_subcommand("expand", "expansion in powers of the scale");
        gn_expand_cmd->add_option("A", a)->required();
        gn_expand_cmd->add_option("--terms", terms, "maximum number of terms")->check(CLI::PositiveNumber);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int rc = app.exit(e, out_, err_);
            return rc == 0 ? kOk : kUsage;
        }

        try {
            if (!config.empty()) settings_ = load_settings_file(config);
            if (prec_opt->count()) settings_.precision = precision;
            if (digits_opt->count()) settings_.digits = digits;
            settings_.estimator.precision = settings_.precision;
            json_ = json;

            if (*val_cmd) return cmd_val(parse(a));
            if (*classify_cmd) return cmd_classify(parse(a));
            if (*dist_cmd) return cmd_dist(parse(a), parse(b));
            if (*st_cmd) return cmd_st(parse(a));
            if (*indep_cmd) return cmd_indep(many);
            if (*expand_cmd) return cmd_expand(parse(a), terms);
            if (*verify_cmd) return cmd_verify(parse(a), series_file);
            if (*est_cmd) return cmd_estimate(csv, envelope);
            if (*nexp_cmd) return cmd_numeric_expand(csv, basis, lattice, numeric_terms);
            if (*rmt_cmd) {
                BoundaryData f = BoundaryData::parse(poly);
                RmtFormula form = formula == "top-log" ? RmtFormula::TopLog : RmtFormula::Exact;
                if (*rmt_eval) return cmd_rmt_eval(f, xmin, xmax, points, bits);
                if (*rmt_coeffs) return cmd_rmt_coeffs(f, orders, form);
                return cmd_rmt_verify(f, orders, form, xmin, xmax, points, bits);
            }
            if (*gn_rep) return emit(print_expr(quotient(parse(a)).rep()), {{"rep", print_expr(quotient(parse(a)).rep())}});
            if (*gn_val_cmd) return cmd_val(quotient(parse(a)).rep());
            if (*gn_dist_cmd) return cmd_dist(quotient(parse(a)).rep(), quotient(parse(b)).rep());
            if (*gn_eq) {
                bool eq = quotient(parse(a)) == quotient(parse(b));
                return emit(eq ? "equal" : "not equal", {{"equal", eq}});
            }
            if (*gn_real) {
                bool r = gn_is_real(quotient(parse(a)));
                return emit(r ? "true" : "false", {{"real", r}});
            }
            if (*gn_expand_cmd) return cmd_expand(quotient(parse(a)).rep(), terms);
        } catch (const Error& e) {
            err_ << "error: " << e.what() << '\n';
            return exit_code(e.kind());
        } catch (const Json::exception& e) {
            err_ << "error: " << to_string(ErrorKind::Syntax) << ": " << e.what() << '\n';
            return kUsage;
        }
        return kUsage;
    }

private:
    Expr parse(const std::string& s) const { return parse_expr(s, ParseOptions{settings_.log_depth}); }

    std::string fmt(double v) const { return format_double(v, settings_.digits); }

    Json num(double v) const
    {
        if (!std::isfinite(v)) return fmt(v);
        return std::stod(fmt(v));
    }

    Json valuation_json(const Valuation& v) const
    {
        if (v.is_infinite()) return {{"text", "inf"}, {"value", "inf"}};
        return {{"text", to_string(v)}, {"value", num(v.to_double())}, {"exponent", detail::quad_to_json(v.value())}};
    }

    int emit(const std::string& text, const Json& j, int rc = kOk)
    {
        if (json_) out_ << j.dump(2) << '\n';
        else out_ << text << (text.empty() || text.back() == '\n' ? "" : "\n");
        return rc;
    }

    std::string series_table(const VAsymptoticSeries& s) const
    {
        std::vector<std::vector<std::string>> cells{{"n", "r", "phi"}};
        for (std::size_t n = 0; n < s.size(); ++n) cells.push_back({std::to_string(n), to_string(s[n].r), print_expr(s[n].phi)});
        return table(cells) + "diverges_to_infinity: " + (s.diverges_to_infinity() ? "true" : "false") + '\n';
    }

    int cmd_val(const Expr& e)
    {
        Valuation v = val(e);
        return emit(to_string(v), {{"expr", print_expr(e)}, {"valuation", valuation_json(v)}});
    }

    int cmd_classify(const Expr& e)
    {
        std::string c(to_string(classify(e)));
        return emit(c, {{"expr", print_expr(e)}, {"class", c}, {"valuation", valuation_json(val(e))}});
    }

    int cmd_dist(const Expr& a, const Expr& b)
    {
        double d = dist(a, b);
        return emit(fmt(d), {{"distance", num(d)}, {"valuation", valuation_json(val(a - b))}});
    }

    int cmd_st(const Expr& e)
    {
        Decomposition d = pseudo_st(e);
        return emit(print_expr(d.phi), {{"st", print_expr(d.phi)}, {"remainder", print_expr(d.dphi)}});
    }

    int cmd_indep(const std::vector<std::string>& args)
    {
        std::vector<Expr> fs;
        for (const auto& s : args) fs.push_back(parse(s));
        IndependenceResult r = is_v_independent(fs);
        Json j{{"independent", r.independent}};
        std::string text = r.independent ? "independent" : "dependent";
        if (r.witness) {
            Json alpha = Json::array();
            std::string list;
            for (const auto& c : r.witness->alpha) {
                std::string s = print_expr(Expr(c));
                alpha.push_back(s);
                list += (list.empty() ? "" : ", ") + s;
            }
            j["witness"] = {{"alpha", alpha}, {"valuation", valuation_json(r.witness->valuation)}};
            text += "\nalpha: [" + list + "]\nvaluation: " + to_string(r.witness->valuation);
        }
        return emit(text, j);
    }

    int cmd_expand(const Expr& e, std::size_t terms)
    {
        VAsymptoticSeries s = expand(e, terms);
        return emit(series_table(s), series_to_json(s));
    }

    int cmd_verify(const Expr& e, const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
        VAsymptoticSeries s = series_from_json(Json::parse(in));
        VerifyReport r = verify_expansion(e, s);
        std::vector<std::vector<std::string>> cells{{"n", "r", "v_after", "v_before", "little_o", "infinitesimal", "v_constant", "ok"}};
        Json rows = Json::array();
        auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
        for (const auto& row : r.rows) {
            cells.push_back({std::to_string(row.n), to_string(row.r), to_string(row.after), to_string(row.before), yn(row.little_o),
                             yn(row.infinitesimal), yn(row.v_constant), row.ok() ? "PASS" : "FAIL"});
            rows.push_back({{"n", row.n},
                            {"r", detail::quad_to_json(row.r)},
                            {"v_after", valuation_json(row.after)},
                            {"v_before", valuation_json(row.before)},
                            {"little_o", row.little_o},
                            {"infinitesimal", row.infinitesimal},
                            {"v_constant", row.v_constant},
                            {"pass", row.ok()}});
        }
        std::string text = table(cells) + (r.passed ? "PASS" : "FAIL at n = " + std::to_string(*r.first_failure)) + '\n'
                         + "complete: " + (r.complete ? "true" : "false") + '\n';
        Json j{{"rows", rows}, {"passed", r.passed}, {"complete", r.complete}};
        if (r.first_failure) j["first_failure"] = *r.first_failure;
        return emit(text, j, r.passed ? kOk : kDomain);
    }

    int cmd_estimate(const std::string& csv, const std::string& envelope)
    {
        EstimatorConfig cfg = settings_.estimator;
        if (!envelope.empty()) cfg.envelope = detail::parse_envelope(envelope);
        ValEstimate e = estimate_val(read_csv_file(csv), cfg);
        std::ostringstream t;
        t << "vhat: " << fmt(e.vhat) << '\n'
          << "std_error: " << fmt(e.std_error) << '\n'
          << "log_power: " << fmt(e.log_power) << '\n'
          << "window: " << fmt(e.window.first) << ' ' << fmt(e.window.second) << '\n'
          << "envelope: " << (e.envelope_used ? "on" : "off") << '\n'
          << "points: " << e.points_used << '\n'
          << "possibly_not_moderate: " << (e.possibly_not_moderate ? "true" : "false") << '\n';
        Json j{{"vhat", num(e.vhat)},
               {"std_error", num(e.std_error)},
               {"log_power", num(e.log_power)},
               {"window", {num(e.window.first), num(e.window.second)}},
               {"envelope", e.envelope_used},
               {"points", e.points_used},
               {"possibly_not_moderate", e.possibly_not_moderate},
               {"null", e.null}};
        return emit(t.str(), j);
    }

    int cmd_numeric_expand(const std::string& csv, const std::vector<std::string>& basis, const std::string& lattice, std::size_t terms)
    {
        std::vector<Expr> b;
        for (const auto& s : basis) b.push_back(parse(s));
        ExpandConfig cfg;
        cfg.estimator = settings_.estimator;
        cfg.lattice = Lattice::parse(lattice);
        cfg.max_terms = terms;
        NumericExpansion n = numeric_expand(read_csv_file(csv), BasisSpan(b), cfg);
        const ExpandDiagnostics& d = n.diagnostics;
        std::ostringstream t;
        t << series_table(n.series) << "basis_condition: " << fmt(d.basis_condition) << '\n'
          << "joint_condition: " << fmt(d.joint_condition) << '\n'
          << "residual_norm: " << fmt(d.residual_norm) << '\n'
          << "samples: " << d.samples << '\n';
        Json terms_json = Json::array();
        for (const auto& tr : d.terms) {
            t << "term r = " << to_string(tr.r) << ": rhat " << fmt(tr.rhat) << ", residual vhat " << fmt(tr.residual_vhat) << '\n';
            Json coeffs = Json::array();
            for (const auto& c : tr.coefficients) coeffs.push_back({num(c.real()), num(c.imag())});
            terms_json.push_back({{"r", detail::quad_to_json(tr.r)},
                                  {"rhat", num(tr.rhat)},
                                  {"residual_vhat", num(tr.residual_vhat)},
                                  {"residual_null", tr.residual_null},
                                  {"coefficients", coeffs}});
        }
        Json j{{"series", series_to_json(n.series)},
               {"diagnostics",
                {{"null", d.null},
                 {"basis_condition", num(d.basis_condition)},
                 {"joint_condition", num(d.joint_condition)},
                 {"residual_norm", num(d.residual_norm)},
                 {"samples", d.samples},
                 {"terms", terms_json}}}};
        return emit(t.str(), j);
    }

    static std::vector<double> grid(double xmin, double xmax, std::size_t points)
    {
        if (points == 1) return {xmin};
        return geometric_grid(xmin, xmax, points);
    }

    int cmd_rmt_eval(const BoundaryData& f, double xmin, double xmax, std::size_t points, unsigned bits)
    {
        std::ostringstream t;
        t << "x,re,im\n";
        Json rows = Json::array();
        for (double x : grid(xmin, xmax, points)) {
            HpComplex v = rmt_integral_eval(x, f, bits);
            std::string re = to_decimal(v.re, settings_.digits), im = to_decimal(v.im, settings_.digits);
            t << fmt(x) << ',' << re << ',' << im << '\n';
            rows.push_back({{"x", num(x)}, {"re", re}, {"im", im}});
        }
        return emit(t.str(), Json{{"bits", bits}, {"values", rows}});
    }

    int cmd_rmt_coeffs(const BoundaryData& f, std::size_t orders, RmtFormula form)
    {
        VAsymptoticSeries s = rmt_series(f, orders, form);
        return emit(series_table(s), series_to_json(s));
    }

    int cmd_rmt_verify(const BoundaryData& f, std::size_t orders, RmtFormula form, double xmin, double xmax, std::size_t points,
                       unsigned bits)
    {
        RmtReport r = rmt_verify(f, rmt_series(f, orders, form), grid(xmin, xmax, points), bits);
        std::ostringstream t;
        t << rmt_report_table(r, settings_.digits);
        for (const auto& term : r.terms)
            t << "n = " << term.n << ": vhat " << (term.null ? std::string("inf") : fmt(term.vhat)) << ", threshold "
              << fmt(term.threshold) << ", " << (term.pass ? "PASS" : "FAIL") << '\n';
        t << (r.passed() ? "PASS" : "FAIL") << '\n';
        return emit(t.str(), rmt_report_json(r, settings_.digits), r.passed() ? kOk : kDomain);
    }

    std::ostream& out_;
    std::ostream& err_;
    Settings settings_;
    bool json_ = false;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    return Program(out, err).run(argc, argv);
}

} // namespace vasym::cli
