#include "bfsi/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bfsi/control.hpp"
#include "bfsi/geometry.hpp"
#include "bfsi/grid.hpp"

namespace bfsi {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMmsDataTol = 1e-9;
}  // namespace

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::semi_implicit_euler: return "semi_implicit_euler";
        case Scheme::crank_nicolson_picard: return "crank_nicolson_picard";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "semi_implicit_euler") return Scheme::semi_implicit_euler;
    if (name == "crank_nicolson_picard") return Scheme::crank_nicolson_picard;
    throw InvalidConfig("unknown scheme '" + name + "'");
}

InitialVelocity InitialVelocity::sin_pi(double amplitude) {
    InitialVelocity v;
    v.kind = Kind::sin_pi;
    v.amplitude = amplitude;
    return v;
}

InitialVelocity InitialVelocity::parabola(double amplitude) {
    InitialVelocity v;
    v.kind = Kind::parabola;
    v.amplitude = amplitude;
    return v;
}

InitialVelocity InitialVelocity::nodal(std::vector<double> values) {
    InitialVelocity v;
    v.kind = Kind::samples;
    v.samples = std::move(values);
    return v;
}

InitialVelocity InitialVelocity::mms_target() {
    InitialVelocity v;
    v.kind = Kind::mms_target;
    return v;
}

InitialVelocity InitialVelocity::custom(std::function<double(double)> fn) {
    InitialVelocity v;
    v.kind = Kind::custom;
    v.fn = std::move(fn);
    return v;
}

double InitialVelocity::operator()(double y) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::sin_pi: return amplitude * std::sin(kPi * y);
        case Kind::parabola: return amplitude * (1.0 - y * y);
        case Kind::custom: return fn(y);
        case Kind::samples:
            throw DomainError("nodal v0 has no pointwise evaluation");
        case Kind::mms_target:
            throw DomainError("mms_target v0 is evaluated through the forcing sources");
    }
    return 0.0;
}

ForcingSpec ForcingSpec::stationary_wave(double center, double amplitude, double rate,
                                         double skew) {
    ForcingSpec f;
    f.kind = Kind::stationary_wave;
    f.center = center;
    f.amplitude = amplitude;
    f.rate = rate;
    f.skew = skew;
    return f;
}

ForcingSpec ForcingSpec::moving_bump(double center, double amplitude, double omega) {
    ForcingSpec f;
    f.kind = Kind::moving_bump;
    f.center = center;
    f.amplitude = amplitude;
    f.rate = omega;
    return f;
}

std::vector<std::string> config_violations(const SimConfig& cfg) {
    std::vector<std::string> out;
    if (!(cfg.K >= 0.0)) out.push_back("K >= 0 required");
    if (!(cfg.h0 > -1.0 && cfg.h0 < 1.0))
        out.push_back("h0 must lie strictly inside (-1,1)");
    if (!(cfg.h1 > -1.0 && cfg.h1 < 1.0))
        out.push_back("h1 must lie strictly inside (-1,1)");
    if (!std::isfinite(cfg.g0)) out.push_back("g0 must be finite");
    if (cfg.n_cells < 4) out.push_back("n_cells >= 4 required");
    if (!(cfg.dt > 0.0)) out.push_back("dt > 0 required");
    if (!(cfg.t_final >= cfg.dt)) out.push_back("t_final >= dt required");
    if (!(cfg.picard_tol > 0.0)) out.push_back("picard_tol > 0 required");
    if (cfg.picard_max < 1) out.push_back("picard_max >= 1 required");

    if (cfg.v0.kind == InitialVelocity::Kind::samples && cfg.n_cells >= 4) {
        const std::size_t want = static_cast<std::size_t>(2 * cfg.n_cells + 1);
        if (cfg.v0.samples.size() != want) {
            out.push_back("v0 samples must have length 2*n_cells+1 = " +
                          std::to_string(want) + ", got " +
                          std::to_string(cfg.v0.samples.size()));
        }
        for (double s : cfg.v0.samples) {
            if (!std::isfinite(s)) {
                out.push_back("v0 samples contain a non-finite value");
                break;
            }
        }
    }

    // Finite evaluation scan at the nodes the initial projection will use.
    if (cfg.v0.is_callable() && cfg.v0.kind != InitialVelocity::Kind::mms_target &&
        cfg.n_cells >= 4 && cfg.h0 > -1.0 && cfg.h0 < 1.0) {
        ReferenceGrid grid(cfg.n_cells);
        for (std::size_t i = 0; i < grid.n_nodes; ++i) {
            const double y = map_to_physical(grid.xi[i], cfg.h0);
            if (!std::isfinite(cfg.v0(y))) {
                out.push_back("v0 evaluates to a non-finite value at y = " +
                              std::to_string(y));
                break;
            }
        }
    }

    if (cfg.forcing.present()) {
        if (cfg.v0.kind != InitialVelocity::Kind::mms_target) {
            out.push_back("forcing requires v0 of kind 'mms_target'");
        }
        if (!(cfg.forcing.center > -1.0 && cfg.forcing.center < 1.0)) {
            out.push_back("forcing center must lie strictly inside (-1,1)");
        } else if (cfg.forcing.kind == ForcingSpec::Kind::moving_bump &&
                   !(std::abs(cfg.forcing.center) + std::abs(cfg.forcing.amplitude) <
                     1.0)) {
            out.push_back("moving_bump interface excursion must stay inside (-1,1)");
        } else if (cfg.h0 > -1.0 && cfg.h0 < 1.0 && cfg.K >= 0.0 && cfg.h1 > -1.0 &&
                   cfg.h1 < 1.0) {
            const MmsSources mms = MmsSources::from_spec(cfg.forcing, cfg.K, cfg.h1);
            if (std::abs(cfg.h0 - mms.h_star(0.0)) > kMmsDataTol) {
                out.push_back("h0 must equal the forcing interface position at t=0");
            }
            if (std::abs(cfg.g0 - mms.g_star(0.0)) > kMmsDataTol) {
                out.push_back("g0 must equal the forcing interface velocity at t=0");
            }
        }
    } else if (cfg.v0.kind == InitialVelocity::Kind::mms_target) {
        out.push_back("v0 of kind 'mms_target' requires forcing");
    }

    return out;
}

ValidatedConfig validate_config(const SimConfig& cfg) {
    const std::vector<std::string> violations = config_violations(cfg);
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const std::string& v : violations) msg += "\n  - " + v;
        throw InvalidConfig(msg);
    }
    return ValidatedConfig(cfg);
}

namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> known,
                         const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw InvalidConfig(std::string("unknown key '") + it.key() + "' in " +
                                where);
        }
    }
}

double get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw InvalidConfig(std::string("missing key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw InvalidConfig(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw InvalidConfig(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

int get_integer(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw InvalidConfig(std::string("missing key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw InvalidConfig(std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

InitialVelocity v0_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidConfig("'v0' must be an object");
    reject_unknown_keys(j, {"kind", "amplitude", "values"}, "v0");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw InvalidConfig("'v0.kind' must be a string");
    const std::string kind = j.at("kind").get<std::string>();

    if (kind == "zero") return InitialVelocity::zero();
    if (kind == "sin_pi") return InitialVelocity::sin_pi(get_number_or(j, "amplitude", 1.0));
    if (kind == "parabola")
        return InitialVelocity::parabola(get_number_or(j, "amplitude", 1.0));
    if (kind == "mms_target") return InitialVelocity::mms_target();
    if (kind == "samples") {
        if (!j.contains("values") || !j.at("values").is_array())
            throw InvalidConfig("'v0.values' must be an array for kind 'samples'");
        std::vector<double> values;
        for (const auto& e : j.at("values")) {
            if (!e.is_number()) throw InvalidConfig("'v0.values' entries must be numbers");
            values.push_back(e.get<double>());
        }
        return InitialVelocity::nodal(std::move(values));
    }
    throw InvalidConfig("unknown v0 kind '" + kind + "'");
}

nlohmann::json v0_to_json(const InitialVelocity& v) {
    nlohmann::json j;
    switch (v.kind) {
        case InitialVelocity::Kind::zero:
            j["kind"] = "zero";
            break;
        case InitialVelocity::Kind::sin_pi:
            j["kind"] = "sin_pi";
            j["amplitude"] = v.amplitude;
            break;
        case InitialVelocity::Kind::parabola:
            j["kind"] = "parabola";
            j["amplitude"] = v.amplitude;
            break;
        case InitialVelocity::Kind::samples:
            j["kind"] = "samples";
            j["values"] = v.samples;
            break;
        case InitialVelocity::Kind::mms_target:
            j["kind"] = "mms_target";
            break;
        case InitialVelocity::Kind::custom:
            throw InvalidConfig("custom v0 callable is not serializable");
    }
    return j;
}

ForcingSpec forcing_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidConfig("'forcing' must be an object");
    reject_unknown_keys(j, {"kind", "center", "amplitude", "rate", "skew"}, "forcing");
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw InvalidConfig("'forcing.kind' must be a string");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "stationary_wave") {
        return ForcingSpec::stationary_wave(
            get_number(j, "center"), get_number(j, "amplitude"), get_number(j, "rate"),
            get_number_or(j, "skew", 1.0));
    }
    if (kind == "moving_bump") {
        return ForcingSpec::moving_bump(get_number(j, "center"),
                                        get_number(j, "amplitude"),
                                        get_number(j, "rate"));
    }
    throw InvalidConfig("unknown forcing kind '" + kind + "'");
}

nlohmann::json forcing_to_json(const ForcingSpec& f) {
    nlohmann::json j;
    switch (f.kind) {
        case ForcingSpec::Kind::stationary_wave:
            j["kind"] = "stationary_wave";
            j["skew"] = f.skew;
            break;
        case ForcingSpec::Kind::moving_bump:
            j["kind"] = "moving_bump";
            break;
        case ForcingSpec::Kind::none:
            throw DomainError("absent forcing has no JSON form");
    }
    j["center"] = f.center;
    j["amplitude"] = f.amplitude;
    j["rate"] = f.rate;
    return j;
}

}  // namespace

SimConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidConfig("config root must be a JSON object");
    reject_unknown_keys(j,
                        {"K", "h1", "h0", "g0", "v0", "n_cells", "dt", "t_final",
                         "picard_tol", "picard_max", "scheme", "forcing"},
                        "config");

    SimConfig cfg;
    cfg.K = get_number(j, "K");
    cfg.h1 = get_number(j, "h1");
    cfg.h0 = get_number(j, "h0");
    cfg.g0 = get_number(j, "g0");
    cfg.n_cells = get_integer(j, "n_cells");
    cfg.dt = get_number(j, "dt");
    cfg.t_final = get_number(j, "t_final");
    cfg.picard_tol = get_number_or(j, "picard_tol", cfg.picard_tol);
    if (j.contains("picard_max")) cfg.picard_max = get_integer(j, "picard_max");
    if (j.contains("scheme")) {
        if (!j.at("scheme").is_string())
            throw InvalidConfig("'scheme' must be a string");
        cfg.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    }
    if (j.contains("v0")) cfg.v0 = v0_from_json(j.at("v0"));
    if (j.contains("forcing")) cfg.forcing = forcing_from_json(j.at("forcing"));
    return cfg;
}

nlohmann::json config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["K"] = cfg.K;
    j["h1"] = cfg.h1;
    j["h0"] = cfg.h0;
    j["g0"] = cfg.g0;
    j["v0"] = v0_to_json(cfg.v0);
    j["n_cells"] = cfg.n_cells;
    j["dt"] = cfg.dt;
    j["t_final"] = cfg.t_final;
    j["picard_tol"] = cfg.picard_tol;
    j["picard_max"] = cfg.picard_max;
    j["scheme"] = scheme_name(cfg.scheme);
    if (cfg.forcing.present()) j["forcing"] = forcing_to_json(cfg.forcing);
    return j;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidConfig("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const SimConfig& cfg) {
    const std::string canon = config_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace bfsi
