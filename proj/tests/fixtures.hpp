#pragma once

#include <vector>

namespace vasym::testing {

struct NumericFixture {
    const char* expr;
    std::vector<const char*> basis;
};

/// Finite expansions with exponents on the quarter lattice, at most three
/// terms, bases of at most six elements (1 included).
inline std::vector<NumericFixture> numeric_fixtures()
{
    return {
        {"sin(x)/x + ln(x)/x^2", {"sin(x)", "cos(x)", "ln(x)"}},
        {"x^(-3/2)", {}},
        {"2/x + 3/x^2", {}},
        {"cos(x)/x^(1/2) + 1/x^(5/4)", {"sin(x)", "cos(x)"}},
        {"ln(x)/x^(3/4) - 2/x^(7/4)", {"ln(x)"}},
        {"(1 + i)*exp(2*i*x)/x + 1/x^3", {"exp(2*i*x)", "exp(-2*i*x)"}},
        {"1/2 + sin(x)/x^(1/4) + cos(x)/x^(3/4)", {"sin(x)", "cos(x)"}},
        {"ln(ln(x))/x^2 + 1/x^(9/4)", {"ln(ln(x))"}},
        {"3*sin(2*x)/x^(5/2) - ln(x)^2/x^(11/4)", {"sin(2*x)", "cos(2*x)", "ln(x)^2"}},
        {"(sin(x) + ln(x))/x + cos(x)/x^2 + 1/x^3", {"sin(x)", "cos(x)", "ln(x)", "ln(x)*sin(x)", "ln(x)*cos(x)"}},
    };
}

} // namespace vasym::testing
