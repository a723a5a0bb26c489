#pragma once

// key = value settings for the command line tool:
//
//   log_depth = 3
//   precision = 128
//   digits = 17
//   [estimator]
//   envelope = "auto"
//   x0 = 1000
//
// Estimator keys may also be written flat as estimator.x0 = 1000.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "vasym/estimator.hpp"
#include "vasym/expr.hpp"

namespace vasym {

struct Settings {
    std::size_t log_depth = kDefaultLogDepth;
    unsigned precision = 128;
    int digits = 17;
    EstimatorConfig estimator;
};

namespace detail {

template <class T>
T config_number(const std::string& key, const std::string& v)
{
    T out{};
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size())
        throw Error(ErrorKind::Syntax, "config key " + key + ": cannot read '" + v + "' as a number");
    return out;
}

inline bool config_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(ErrorKind::Syntax, "config key " + key + ": expected true or false, got '" + v + "'");
}

inline EnvelopeMode parse_envelope(const std::string& v)
{
    if (v == "auto") return EnvelopeMode::Auto;
    if (v == "on") return EnvelopeMode::On;
    if (v == "off") return EnvelopeMode::Off;
    throw Error(ErrorKind::Syntax, "envelope must be auto, on or off, got '" + v + "'");
}

inline void apply_setting(Settings& s, const std::string& key, const std::string& v)
{
    EstimatorConfig& e = s.estimator;
    if (key == "log_depth") {
        s.log_depth = config_number<std::size_t>(key, v);
        if (s.log_depth == 0) throw Error(ErrorKind::Syntax, "log_depth must be at least 1");
    } else if (key == "precision") {
        s.precision = config_number<unsigned>(key, v);
        if (s.precision < 32) throw Error(ErrorKind::Syntax, "precision must be at least 32 bits");
    } else if (key == "digits") {
        s.digits = config_number<int>(key, v);
        if (s.digits < 1 || s.digits > 40) throw Error(ErrorKind::Syntax, "digits must lie in [1, 40]");
    } else if (key == "estimator.envelope") {
        e.envelope = parse_envelope(v);
    } else if (key == "estimator.log_aware") {
        e.log_aware = config_bool(key, v);
    } else if (key == "estimator.componentwise") {
        e.componentwise = config_bool(key, v);
    } else if (key == "estimator.osc_scale") {
        e.osc_scale = config_number<double>(key, v);
    } else if (key == "estimator.window_samples") {
        e.window_samples = config_number<std::size_t>(key, v);
    } else if (key == "estimator.detrend_iterations") {
        e.detrend_iterations = config_number<std::size_t>(key, v);
    } else if (key == "estimator.x0") {
        e.x0 = config_number<double>(key, v);
    } else if (key == "estimator.growth") {
        e.growth = config_number<double>(key, v);
    } else if (key == "estimator.points") {
        e.points = config_number<std::size_t>(key, v);
    } else if (key == "estimator.null_floor") {
        e.null_floor = config_number<double>(key, v);
    } else if (key == "estimator.tolerance") {
        e.tolerance = config_number<double>(key, v);
    } else {
        throw Error(ErrorKind::Syntax, "unknown config key '" + key + "'");
    }
}

} // namespace detail

/// Applies the settings in `in` on top of `base`.
inline Settings load_settings(std::istream& in, Settings base = {})
{
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error& e) {
        throw Error(ErrorKind::Syntax, std::string("config: ") + e.what());
    }
    for (const auto& it : items) {
        if (it.name == "++" || it.name == "--") continue; // section markers
        if (it.inputs.size() != 1) throw Error(ErrorKind::Syntax, "config key " + it.fullname() + " needs exactly one value");
        detail::apply_setting(base, it.fullname(), it.inputs.front());
    }
    base.estimator.precision = base.precision;
    return base;
}

inline Settings load_settings_file(const std::string& path, Settings base = {})
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path);
    return load_settings(in, std::move(base));
}

} // namespace vasym
