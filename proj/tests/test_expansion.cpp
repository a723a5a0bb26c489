#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "vasym/json.hpp"
#include "vasym/parse.hpp"
#include "vasym/series.hpp"

using namespace vasym;
using vasym::testing::ExprGen;
using vasym::testing::group_by_rho;

namespace {

Expr P(const char* s) { return parse_expr(s); }

const char* kSine = "pi/2 - cos(x)/x - sin(x)/x^2 + 2*cos(x)/x^3 + 6*sin(x)/x^4";

} // namespace

TEST(Expand, Examples)
{
    VAsymptoticSeries s = expand(P("sin(x)/x + ln(x)/x^2"));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].r, ExponentValue(1));
    EXPECT_EQ(s[0].phi, P("sin(x)"));
    EXPECT_EQ(s[1].r, ExponentValue(2));
    EXPECT_EQ(s[1].phi, P("ln(x)"));
    EXPECT_TRUE(s.diverges_to_infinity());

    VAsymptoticSeries z = expand(Expr());
    EXPECT_TRUE(z.empty());
    EXPECT_TRUE(expand(P("exp(-x)")).empty());
}

TEST(Expand, SineSeries)
{
    Expr f = P(kSine);
    VAsymptoticSeries s = expand(f);
    ASSERT_EQ(s.size(), 5u);
    const char* coeffs[] = {"pi/2", "-cos(x)", "-sin(x)", "2*cos(x)", "6*sin(x)"};
    for (int n = 0; n < 5; ++n) {
        EXPECT_EQ(s[n].r, ExponentValue(n));
        EXPECT_EQ(s[n].phi, P(coeffs[n]));
    }
    EXPECT_EQ(partial_sum(s, 1), P("pi/2 - cos(x)/x"));
    EXPECT_EQ(partial_sum(s, 0), P("pi/2"));
    EXPECT_EQ(partial_sum(s, 4), f);
    EXPECT_THROW(partial_sum(s, 5), Error);
    auto d = dv_convergence(f, s);
    ASSERT_EQ(d.size(), 5u);
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(d[n], std::exp(-(n + 1.0)), 1e-12);
    EXPECT_EQ(d[4], 0.0);
}

TEST(Expand, TruncationAndFlag)
{
    Expr f = P("1 + 1/x + 1/x^2 + 1/x^3");
    VAsymptoticSeries s = expand(f, 2);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_FALSE(s.diverges_to_infinity());
    EXPECT_TRUE(verify_expansion(f, s).passed);
    EXPECT_FALSE(verify_expansion(f, s).complete);
}

TEST(Verify, Failures)
{
    EXPECT_TRUE(verify_expansion(P(kSine), expand(P(kSine))).passed);

    VAsymptoticSeries wrong({{ExponentValue(1), P("cos(x)")}}, false);
    VerifyReport r = verify_expansion(P("sin(x)/x"), wrong);
    EXPECT_FALSE(r.passed);
    ASSERT_EQ(r.first_failure, 0u);
    EXPECT_EQ(r.rows[0].after, Valuation(ExponentValue(0)));
    EXPECT_FALSE(r.rows[0].infinitesimal);
    EXPECT_FALSE(r.rows[0].little_o);

    Expr f = P("1/x + 1/x^2 + 1/x^3");
    VAsymptoticSeries gap({{ExponentValue(1), P("1")}, {ExponentValue(3), P("1")}}, true);
    VerifyReport g = verify_expansion(f, gap);
    EXPECT_TRUE(g.rows[0].ok());
    EXPECT_FALSE(g.rows[1].ok());
    EXPECT_EQ(g.first_failure, 1u);
}

TEST(Verify, LittleOUsesDominantLogTerm)
{
    // x^r [f - S_n] = 1/ln x -> 0 although its valuation is 0.
    Expr f = P("1 + 1/ln(x)");
    VAsymptoticSeries s({{ExponentValue(0), P("1")}}, false);
    VerifyReport r = verify_expansion(f, s);
    EXPECT_TRUE(r.rows[0].little_o);
    EXPECT_FALSE(r.rows[0].infinitesimal);
    EXPECT_FALSE(r.passed);
}

TEST(Series, CanonicalFormChecks)
{
    // {1 + n + x^(-1/n)} are not v-independent
    std::vector<SeriesTerm> bad;
    for (int n = 1; n <= 3; ++n)
        bad.push_back({ExponentValue(n), Expr(long(1 + n)) + Expr::x_power(ExponentValue(Rational(1, n)))});
    EXPECT_TRUE(VAsymptoticSeries::check(bad).has_value());
    EXPECT_THROW(VAsymptoticSeries(bad, false), Error);
    // ln^n x all at exponent 0
    std::vector<SeriesTerm> logs;
    for (int n = 0; n < 3; ++n) logs.push_back({ExponentValue(0), Expr::log_power(1, n + 1)});
    EXPECT_TRUE(VAsymptoticSeries::check(logs).has_value());
    // coefficient with nonzero valuation
    EXPECT_TRUE(VAsymptoticSeries::check({{ExponentValue(0), P("1/x")}}).has_value());
    // zero coefficients sit outside the support
    VAsymptoticSeries holes({{ExponentValue(1), Expr()}, {ExponentValue(0), P("1")}, {ExponentValue(2), P("sin(x)")}}, false);
    EXPECT_EQ(holes.support(), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(holes.exponents().size(), 2u);
}

TEST(ExpandProperty, MatchesGroupingOracle)
{
    ExprGen g(555);
    for (int k = 0; k < 200; ++k) {
        Expr f = g.expr(6);
        VAsymptoticSeries s = expand(f);
        EXPECT_EQ(s.terms(), group_by_rho(f));
        VerifyReport r = verify_expansion(f, s);
        EXPECT_TRUE(r.passed);
        EXPECT_TRUE(r.complete);
        for (const auto& row : r.rows) EXPECT_TRUE(row.little_o);
    }
}

TEST(ExpandProperty, UniquenessAndRoundTrip)
{
    ExprGen g(556);
    for (int k = 0; k < 100; ++k) {
        Expr f = g.expr(6);
        auto ms = f.monomials();
        std::reverse(ms.begin(), ms.end());
        Expr regrouped = Expr::from_parts(ms, f.null_atoms());
        VAsymptoticSeries s = expand(f);
        EXPECT_EQ(expand(regrouped), s);
        if (!s.empty()) {
            EXPECT_EQ(expand(partial_sum(s, s.size() - 1)), s);
            EXPECT_EQ(series_from_json(Json::parse(series_to_json(s).dump())), s);
        }
    }
}

TEST(ExpandProperty, ResidualLaw)
{
    ExprGen g(557);
    for (int k = 0; k < 200; ++k) {
        Expr f = g.expr(6);
        VAsymptoticSeries s = expand(f);
        for (std::size_t n = 0; n + 1 < s.size(); ++n)
            EXPECT_EQ(val(f - partial_sum(s, n)), Valuation(s[n + 1].r));
        if (!s.empty()) EXPECT_TRUE(val(f - partial_sum(s, s.size() - 1)).is_infinite());
    }
}

TEST(Json, SeriesDocument)
{
    VAsymptoticSeries s = expand(P(kSine));
    Json j = series_to_json(s);
    EXPECT_EQ(j["support"], Json({0, 1, 2, 3, 4}));
    EXPECT_EQ(j["exponents"][3]["a"], "3");
    EXPECT_EQ(series_from_json(j), s);
    Json broken = j;
    broken["support"] = Json({0, 1});
    EXPECT_THROW(series_from_json(broken), Error);
    EXPECT_THROW(series_from_json(Json::parse("{\"exponents\": 3}")), Error);
}
