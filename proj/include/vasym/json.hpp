#pragma once

// SeriesDocument:
//   {"exponents": [{"a": "1", "b": "0", "c": "1"}, ...],
//    "coefficients": [[monomial record, ...], ...],
//    "support": [indices],
//    "diverges_to_infinity": bool}
//
// A monomial record is {"coeff": {"re": [...], "im": [...]}, "rho": {a,b,c},
// "logs": [...], "freq": {a,b}}; re/im list the rational coefficients of
// pi^0, pi^1, ... A null atom record additionally has "alpha". Rationals are
// strings ("3/4") so documents round-trip exactly; plain JSON numbers are
// accepted on input.

#include <string>

#include <json.hpp>

#include "vasym/series.hpp"

namespace vasym {

using Json = nlohmann::json;

namespace detail {

inline Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
    throw Error(ErrorKind::Io, "expected a rational, got " + j.dump());
}

inline Json quad_to_json(const ExponentValue& e)
{
    return {{"a", to_string(e.rational_part())}, {"b", to_string(e.pi_part())}, {"c", to_string(e.pi2_part())}};
}

inline Rational field_or_zero(const Json& j, const char* key)
{
    return j.contains(key) ? rational_from_json(j.at(key)) : Rational(0);
}

inline ExponentValue exponent_from_json(const Json& j)
{
    return {field_or_zero(j, "a"), field_or_zero(j, "b"), field_or_zero(j, "c")};
}

inline Json scalar_to_json(const Scalar& s)
{
    Json re = Json::array(), im = Json::array();
    for (const auto& c : s.coeffs()) {
        re.push_back(to_string(c.re()));
        im.push_back(to_string(c.im()));
    }
    return {{"re", re}, {"im", im}};
}

inline Scalar scalar_from_json(const Json& j)
{
    std::vector<ComplexRational> cs;
    const Json re = j.value("re", Json::array());
    const Json im = j.value("im", Json::array());
    for (std::size_t k = 0; k < std::max(re.size(), im.size()); ++k)
        cs.emplace_back(k < re.size() ? rational_from_json(re[k]) : Rational(0),
                        k < im.size() ? rational_from_json(im[k]) : Rational(0));
    return Scalar(std::move(cs));
}

inline void key_to_json(Json& j, const MonomialKey& k)
{
    j["rho"] = quad_to_json(k.rho);
    j["logs"] = k.logs;
    j["freq"] = {{"a", to_string(k.freq.rational_part())}, {"b", to_string(k.freq.pi_part())}};
}

inline MonomialKey key_from_json(const Json& j)
{
    ExponentValue rho = j.contains("rho") ? exponent_from_json(j.at("rho")) : ExponentValue{};
    std::vector<int> logs = j.value("logs", std::vector<int>{});
    Frequency w;
    if (j.contains("freq")) w = Frequency(field_or_zero(j.at("freq"), "a"), field_or_zero(j.at("freq"), "b"));
    return {rho, logs, w};
}

} // namespace detail

inline Json expr_to_json(const Expr& e)
{
    Json out = Json::array();
    for (const auto& [k, c] : e.terms()) {
        Json m = {{"coeff", detail::scalar_to_json(c)}};
        detail::key_to_json(m, k);
        out.push_back(std::move(m));
    }
    for (const auto& [k, c] : e.null_part()) {
        Json m = {{"coeff", detail::scalar_to_json(c)}, {"alpha", to_string(k.alpha)}};
        detail::key_to_json(m, k.factor);
        out.push_back(std::move(m));
    }
    return out;
}

inline Expr expr_from_json(const Json& j)
{
    if (!j.is_array()) throw Error(ErrorKind::Io, "coefficient must be an array of monomial records");
    std::vector<Monomial> ms;
    std::vector<NullAtom> atoms;
    for (const auto& r : j) {
        Scalar c = detail::scalar_from_json(r.at("coeff"));
        MonomialKey k = detail::key_from_json(r);
        if (r.contains("alpha"))
            atoms.push_back({c, detail::rational_from_json(r.at("alpha")), k});
        else
            ms.push_back({c, k});
    }
    return Expr::from_parts(ms, atoms);
}

inline Json series_to_json(const VAsymptoticSeries& s)
{
    Json exps = Json::array(), coeffs = Json::array();
    for (const auto& t : s.terms()) {
        exps.push_back(detail::quad_to_json(t.r));
        coeffs.push_back(expr_to_json(t.phi));
    }
    return {{"exponents", exps},
            {"coefficients", coeffs},
            {"support", s.support()},
            {"diverges_to_infinity", s.diverges_to_infinity()}};
}

/// Throws Io on malformed documents and InvariantViolation when the terms
/// are not canonical or "support" disagrees with the coefficients.
inline VAsymptoticSeries series_from_json(const Json& j)
{
    try {
        const Json& exps = j.at("exponents");
        const Json& coeffs = j.at("coefficients");
        if (exps.size() != coeffs.size()) throw Error(ErrorKind::Io, "exponents and coefficients differ in length");
        std::vector<SeriesTerm> terms;
        for (std::size_t n = 0; n < exps.size(); ++n)
            terms.push_back({detail::exponent_from_json(exps[n]), expr_from_json(coeffs[n])});
        VAsymptoticSeries s(std::move(terms), j.value("diverges_to_infinity", false));
        if (j.contains("support") && j.at("support").get<std::vector<std::size_t>>() != s.support())
            throw Error(ErrorKind::InvariantViolation, "support does not match the nonzero coefficients");
        return s;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed series document: ") + e.what());
    }
}

} // namespace vasym
