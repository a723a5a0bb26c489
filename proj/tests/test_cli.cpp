#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace vasym;

namespace {

struct Outcome {
    int rc;
    std::string out, err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "vasym");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = cli::run(int(argv.size()), argv.data(), out, err);
    return {rc, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content)
{
    auto p = std::filesystem::temp_directory_path() / ("vasym_cli_" + name);
    std::ofstream(p) << content;
    return p.string();
}

} // namespace

TEST(Cli, Valuation)
{
    Outcome o = run({"val", "ln(x)/x"});
    EXPECT_EQ(o.rc, 0);
    EXPECT_EQ(o.out, "1\n");
    EXPECT_EQ(run({"val", "x^3 + x"}).out, "-3\n");
    EXPECT_EQ(run({"val", "exp(-x)"}).out, "inf\n");
    EXPECT_EQ(run({"val", "1/x^(pi^2)"}).out, "pi^2\n");
    EXPECT_EQ(run({"classify", "sin(x)/x"}).out, "VInfinitesimal\n");
    EXPECT_EQ(run({"classify", "sin(x) + 1/x"}).out, "VConstant\n");
}

TEST(Cli, ExitCodes)
{
    Outcome st = run({"st", "x"});
    EXPECT_EQ(st.rc, 1);
    EXPECT_NE(st.err.find("NotVFinite"), std::string::npos);
    EXPECT_EQ(run({"val", "exp(x)"}).rc, 1);
    EXPECT_EQ(run({"val", "1/sin(x)"}).rc, 1);
    EXPECT_EQ(run({"val", "1/("}).rc, 2);
    EXPECT_EQ(run({}).rc, 2);
    EXPECT_EQ(run({"val"}).rc, 2);
    EXPECT_EQ(run({"frobnicate"}).rc, 2);
    EXPECT_EQ(run({"estimate-val", "--csv", "/nonexistent/file.csv"}).rc, 2);
    EXPECT_EQ(run({"--help"}).rc, 0);
}

TEST(Cli, DistanceAndDigits)
{
    EXPECT_EQ(run({"dist", "sin(x)", "sin(x) + 1/x^2"}).out, "1.3533528323661270e-01\n");
    EXPECT_EQ(run({"--digits", "5", "dist", "sin(x)", "sin(x) + 1/x^2"}).out, "1.3534e-01\n");
    EXPECT_EQ(run({"dist", "sin(x)", "sin(x) + exp(-x)"}).out, "0.0000000000000000e+00\n");
}

TEST(Cli, PseudostandardPartAndIndependence)
{
    EXPECT_EQ(run({"st", "sin(x) + 1/x"}).out, print_expr(parse_expr("sin(x)")) + "\n");
    EXPECT_EQ(run({"indep", "1", "ln(x)", "sin(x)"}).out, "independent\n");
    Outcome d = run({"indep", "1", "-1 + 1/x"});
    EXPECT_EQ(d.rc, 0);
    EXPECT_NE(d.out.find("dependent"), std::string::npos);
    EXPECT_NE(d.out.find("valuation: 1"), std::string::npos);
}

TEST(Cli, ExpandJsonRoundTripAndDeterminism)
{
    const char* f = "sin(x)/x + ln(x)/x^2 + exp(-x)";
    Outcome a = run({"expand", f, "--json"}), b = run({"--json", "expand", f});
    EXPECT_EQ(a.rc, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(series_from_json(Json::parse(a.out)), expand(parse_expr(f)));
    Outcome t = run({"expand", f, "--terms", "1"});
    EXPECT_NE(t.out.find("diverges_to_infinity: false"), std::string::npos);
}

TEST(Cli, VerifySeriesDocument)
{
    const char* f = "sin(x)/x + ln(x)/x^2";
    std::string path = temp_file("series.json", run({"--json", "expand", f}).out);
    Outcome ok = run({"verify", f, "--series", path});
    EXPECT_EQ(ok.rc, 0);
    EXPECT_NE(ok.out.find("PASS"), std::string::npos);
    Outcome bad = run({"verify", "sin(x)/x + ln(x)/x^3", "--series", path});
    EXPECT_EQ(bad.rc, 1);
    EXPECT_NE(bad.out.find("FAIL at n = 1"), std::string::npos);
    EXPECT_EQ(run({"verify", f, "--series", temp_file("broken.json", "{\"exponents\": [")}).rc, 2);
}

TEST(Cli, SampledCommands)
{
    Expr f = parse_expr("sin(x)/x + ln(x)/x^2");
    SampledFunction s;
    for (int k = 0; k < 400; ++k) {
        double x = 1e3 * std::pow(1e3, k / 399.0);
        s.push_back(x, eval_at(f, x, 128).to_complex());
    }
    std::ostringstream csv;
    write_csv(csv, s);
    std::string path = temp_file("samples.csv", csv.str());

    Outcome e = run({"--json", "estimate-val", "--csv", path, "--envelope", "on"});
    ASSERT_EQ(e.rc, 0) << e.err;
    Json j = Json::parse(e.out);
    EXPECT_NEAR(j["vhat"].get<double>(), 1.0, 0.1);
    EXPECT_TRUE(j["envelope"].get<bool>());
    EXPECT_EQ(run({"estimate-val", "--csv", path, "--envelope", "sideways"}).rc, 2);

    Outcome n = run({"--json", "numeric-expand", "--csv", path, "--basis", "sin(x)", "cos(x)", "ln(x)"});
    ASSERT_EQ(n.rc, 0) << n.err;
    EXPECT_EQ(series_from_json(Json::parse(n.out)["series"]).terms(), expand(f).terms());

    Outcome gap = run({"numeric-expand", "--csv", path, "--basis", "ln(x)"});
    EXPECT_EQ(gap.rc, 3);
    EXPECT_NE(gap.err.find("NoValuationGap"), std::string::npos);
}

TEST(Cli, ConfigFile)
{
    std::string shallow = temp_file("shallow.toml", "# one level of logs\nlog_depth = 1\n");
    EXPECT_EQ(run({"--config", shallow, "val", "ln(x)"}).out, "0\n");
    EXPECT_EQ(run({"--config", shallow, "val", "ln(ln(x))"}).rc, 1);
    std::string bad = temp_file("bad.toml", "log_depht = 2\n");
    EXPECT_EQ(run({"--config", bad, "val", "x"}).rc, 2);
    std::string digits = temp_file("digits.toml", "digits = 3\n[estimator]\nenvelope = \"off\"\n");
    EXPECT_EQ(run({"--config", digits, "dist", "1", "1 + 1/x"}).out, "3.68e-01\n");
    EXPECT_EQ(run({"--config", digits, "--digits", "4", "dist", "1", "1 + 1/x"}).out, "3.679e-01\n");
}

TEST(Cli, GeneralizedNumbers)
{
    EXPECT_EQ(run({"gn", "eq", "sin(x) + exp(-x)", "sin(x)"}).out, "equal\n");
    EXPECT_EQ(run({"gn", "eq", "1/x", "0"}).out, "not equal\n");
    EXPECT_EQ(run({"gn", "val", "x"}).out, "-1\n");
    EXPECT_EQ(run({"gn", "real", "exp(pi*i*x)"}).out, "false\n");
    EXPECT_EQ(run({"gn", "real", "sin(x)"}).out, "true\n");
    EXPECT_EQ(run({"gn", "rep", "1/x + exp(-2*x)"}).out, print_expr(parse_expr("1/x")) + "\n");
    EXPECT_EQ(run({"gn", "dist", "sin(x)", "sin(x) + exp(-x)"}).out, "0.0000000000000000e+00\n");
    EXPECT_EQ(run({"--json", "gn", "expand", "exp(-x)"}).out, run({"--json", "expand", "0"}).out);
    EXPECT_EQ(run({"gn"}).rc, 2);
}

TEST(Cli, IntegralCommands)
{
    Outcome c = run({"rmt", "coeffs", "--poly", "1", "--orders", "2"});
    ASSERT_EQ(c.rc, 0) << c.err;
    EXPECT_NE(c.out.find(print_expr(parse_expr("2*sin(pi*x)"))), std::string::npos);
    EXPECT_NE(c.out.find(print_expr(parse_expr("-4*pi*ln(x)*cos(pi*x)"))), std::string::npos);

    Outcome e = run({"rmt", "eval", "--poly", "1", "--points", "1", "--xmin", "50"});
    ASSERT_EQ(e.rc, 0) << e.err;
    SampledFunction s;
    std::istringstream in(e.out);
    s = read_csv(in);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.value[0].real() / -2.7160782550058661024e-19, 1.0, 1e-15);
    EXPECT_EQ(s.value[0].imag(), 0.0);

    EXPECT_EQ(run({"rmt", "eval", "--poly", "1", "--points", "1", "--xmin", "400", "--bits", "128"}).rc, 3);
    EXPECT_EQ(run({"rmt", "eval", "--poly", "1", "--points", "1", "--xmin", "0.5"}).rc, 1);
    EXPECT_EQ(run({"rmt", "coeffs", "--poly", "1,x"}).rc, 1);
}

TEST(Cli, IntegralVerifyHeadline)
{
    Outcome v = run({"rmt", "verify", "--poly", "1", "--orders", "3", "--bits", "256", "--xmin", "50", "--xmax", "400"});
    ASSERT_EQ(v.rc, 0) << v.err;
    for (const char* line : {"n = 0: ", "n = 1: ", "n = 2: "}) {
        auto at = v.out.find(line);
        ASSERT_NE(at, std::string::npos) << line;
        auto eol = v.out.find('\n', at);
        EXPECT_NE(v.out.substr(at, eol - at).find("PASS"), std::string::npos) << v.out.substr(at, eol - at);
    }
    EXPECT_EQ(v.out.substr(v.out.size() - 5), "PASS\n");
}
