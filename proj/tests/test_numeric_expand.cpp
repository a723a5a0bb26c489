#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"
#include "support.hpp"
#include "vasym/numeric_expand.hpp"
#include "vasym/parse.hpp"

using namespace vasym;

namespace {

Expr P(const char* s) { return parse_expr(s); }

Evaluator evaluator(const Expr& f, unsigned bits = 128)
{
    return [f, bits](const Real& x) { return eval_at(f, x, bits); };
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ErrorKind::Io;
}

} // namespace

TEST(NumericExpand, SineOverXPlusLog)
{
    Expr f = P("sin(x)/x + ln(x)/x^2");
    BasisSpan basis({P("sin(x)"), P("cos(x)"), P("ln(x)")});
    NumericExpansion n = numeric_expand(evaluator(f), basis);
    VAsymptoticSeries exact = expand(f);
    ASSERT_EQ(n.series.size(), 2u);
    EXPECT_EQ(n.series[0].r, exact[0].r);
    EXPECT_EQ(n.series[1].r, exact[1].r);
    EXPECT_EQ(n.series[0].phi, exact[0].phi);
    EXPECT_EQ(n.series[1].phi, exact[1].phi);
    EXPECT_FALSE(n.series.diverges_to_infinity());
    EXPECT_LT(n.diagnostics.basis_condition, 1e8);
    ASSERT_EQ(n.diagnostics.terms.size(), 2u);
    EXPECT_TRUE(n.diagnostics.terms[1].residual_null);
}

TEST(NumericExpand, FromCsvSamples)
{
    Expr f = P("sin(x)/x + ln(x)/x^2");
    SampledFunction s;
    for (int k = 0; k < 400; ++k) {
        double x = 1e3 * std::pow(1e3, k / 399.0);
        s.push_back(x, eval_at(f, x, 128).to_complex());
    }
    NumericExpansion n = numeric_expand(s, BasisSpan({P("sin(x)"), P("cos(x)"), P("ln(x)")}));
    ASSERT_EQ(n.series.size(), 2u);
    EXPECT_EQ(n.series[0].r, ExponentValue(1));
    EXPECT_EQ(n.series[1].r, ExponentValue(2));
    const auto& c0 = n.diagnostics.terms[0].coefficients; // basis order: 1, sin, cos, ln
    EXPECT_NEAR(c0[1].real(), 1.0, 1e-6);
    EXPECT_NEAR(std::abs(c0[0]) + std::abs(c0[2]) + std::abs(c0[3]), 0.0, 1e-6);
    const auto& c1 = n.diagnostics.terms[1].coefficients;
    EXPECT_NEAR(c1[3].real(), 1.0, 1e-6);
    VAsymptoticSeries exact = expand(f);
    EXPECT_EQ(n.series[0].phi, exact[0].phi);
    EXPECT_EQ(n.series[1].phi, exact[1].phi);
}

TEST(NumericExpand, PurePower)
{
    NumericExpansion n = numeric_expand(evaluator(P("x^(-3/2)")), BasisSpan());
    ASSERT_EQ(n.series.size(), 1u);
    EXPECT_NEAR(n.diagnostics.terms[0].rhat, 1.5, 0.1);
    EXPECT_EQ(n.series[0].r, ExponentValue(Rational(3, 2)));
    EXPECT_NEAR(n.diagnostics.terms[0].coefficients[0].real(), 1.0, 1e-12);

    ExpandConfig raw;
    raw.lattice = Lattice::unrounded();
    NumericExpansion u = numeric_expand(evaluator(P("x^(-3/2)")), BasisSpan(), raw);
    ASSERT_GE(u.series.size(), 1u);
    EXPECT_NEAR(to_hp(u.series[0].r).convert_to<double>(), 1.5, 0.1);
}

TEST(NumericExpand, NullAndErrors)
{
    NumericExpansion z = numeric_expand(Evaluator([](const Real&) { return HpComplex(); }), BasisSpan());
    EXPECT_TRUE(z.series.empty());
    EXPECT_TRUE(z.diagnostics.null);

    // sin x is missing from the basis
    EXPECT_EQ(kind_of([] { numeric_expand(evaluator(P("sin(x)/x")), BasisSpan()); }), ErrorKind::NoValuationGap);

    // ln(ln(ln x)) is almost constant on the grid
    ExpandConfig tight;
    tight.cond_max = 10;
    EXPECT_EQ(kind_of([&] { numeric_expand(evaluator(P("1/x")), BasisSpan({P("ln(ln(x))")}), tight); }), ErrorKind::IllConditioned);
}

TEST(NumericExpand, PiSquaredOffsets)
{
    Expr f = P("cos(pi*x)*x^(-1 - pi^2) + x^(-2 - pi^2)");
    NumericExpansion n = numeric_expand(evaluator(f, 160), BasisSpan({P("cos(pi*x)"), P("sin(pi*x)")}), [] {
        ExpandConfig c;
        c.estimator.osc_scale = 2;
        c.estimator.precision = 160;
        return c;
    }());
    ASSERT_EQ(n.series.size(), 2u);
    EXPECT_EQ(n.series[0].r, ExponentValue(Rational(1), Rational(0), Rational(1)));
    EXPECT_EQ(n.series[1].r, ExponentValue(Rational(2), Rational(0), Rational(1)));
}

TEST(Lattice, Parse)
{
    Lattice l = Lattice::parse("1/3;0,pi,1/2 + pi^2");
    EXPECT_EQ(*l.step, Rational(1, 3));
    ASSERT_EQ(l.offsets.size(), 3u);
    EXPECT_EQ(l.offsets[2], ExponentValue(Rational(1, 2), Rational(0), Rational(1)));
    EXPECT_FALSE(Lattice::parse("none").step);
    EXPECT_EQ(Lattice::parse("1/2").offsets.size(), 3u);
    EXPECT_THROW(Lattice::parse("0"), Error);
    EXPECT_THROW(Lattice::parse("1/4;x"), Error);
}

TEST(Rationalize, ContinuedFractions)
{
    WorkingPrecision wp(128);
    EXPECT_EQ(rationalize(Real(0.75), Real(1e-20)), Rational(3, 4));
    EXPECT_EQ(rationalize(Real(-2), Real(1e-20)), Rational(-2));
    Real third = Real(1) / 3;
    EXPECT_EQ(rationalize(third, Real(1e-30)), Rational(1, 3));
    Rational pi = rationalize(hp_pi(), Real(1e-6));
    EXPECT_LE(boost::multiprecision::abs(to_hp(pi) - hp_pi()), Real(1e-6));
}

TEST(NumericExpandProperty, RecoversFixtures)
{
    auto start = std::chrono::steady_clock::now();
    for (const auto& fx : vasym::testing::numeric_fixtures()) {
        Expr f = P(fx.expr);
        std::vector<Expr> b;
        for (const char* s : fx.basis) b.push_back(P(s));
        BasisSpan basis(b);
        ASSERT_LE(basis.size(), 6u);
        NumericExpansion n = numeric_expand(evaluator(f), basis);
        VAsymptoticSeries exact = expand(f);
        ASSERT_EQ(n.series.size(), exact.size()) << fx.expr;
        for (std::size_t t = 0; t < exact.size(); ++t) {
            EXPECT_NEAR(to_hp(n.series[t].r).convert_to<double>(), to_hp(exact[t].r).convert_to<double>(), 0.1) << fx.expr;
            auto want = basis.coordinates(exact[t].phi);
            ASSERT_TRUE(want) << fx.expr;
            const auto& got = n.diagnostics.terms[t].coefficients;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                std::complex<double> w = (to_hp((*want)[k].num()) / to_hp((*want)[k].den())).to_complex();
                EXPECT_LE(std::abs(got[k] - w), 1e-6 * std::max(1.0, std::abs(w))) << fx.expr << " term " << t << " basis " << k;
            }
        }
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}
