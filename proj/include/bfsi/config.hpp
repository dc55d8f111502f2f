#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfsi/errors.hpp"

namespace bfsi {

enum class Scheme { semi_implicit_euler, crank_nicolson_picard };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Initial velocity profile. Builtin kinds and nodal samples round-trip
/// through JSON; `custom` wraps an arbitrary callable and is API-only.
struct InitialVelocity {
    enum class Kind { zero, sin_pi, parabola, samples, mms_target, custom };

    Kind kind = Kind::zero;
    double amplitude = 1.0;
    std::vector<double> samples;  // nodal values on the mapped grid, 2*n_cells+1
    std::function<double(double)> fn;

    static InitialVelocity zero() { return {}; }
    static InitialVelocity sin_pi(double amplitude = 1.0);
    static InitialVelocity parabola(double amplitude = 1.0);
    static InitialVelocity nodal(std::vector<double> values);
    static InitialVelocity mms_target();
    static InitialVelocity custom(std::function<double(double)> fn);

    bool is_callable() const { return kind != Kind::samples; }
    /// Pointwise evaluation for the callable kinds (not samples/mms_target).
    double operator()(double y) const;
};

/// Manufactured-solution selector. Sources themselves are closed-form
/// callables built by the control module from this description.
struct ForcingSpec {
    enum class Kind { none, stationary_wave, moving_bump };

    Kind kind = Kind::none;
    double center = 0.0;     // interface rest position
    double amplitude = 1.0;  // wave amplitude / interface excursion
    double rate = 1.0;       // temporal decay rate / angular frequency
    double skew = 1.0;       // right-branch amplitude factor (stationary_wave)

    bool present() const { return kind != Kind::none; }

    static ForcingSpec none_() { return {}; }
    static ForcingSpec stationary_wave(double center, double amplitude, double rate,
                                       double skew = 1.0);
    static ForcingSpec moving_bump(double center, double amplitude, double omega);
};

/// Full problem + scheme description. Viscosity is fixed at 1 and the fluid
/// domain at (-1,1); neither is configurable.
struct SimConfig {
    double K = 0.0;
    double h1 = 0.0;
    double h0 = 0.0;
    double g0 = 0.0;
    InitialVelocity v0;
    int n_cells = 32;
    double dt = 1e-3;
    double t_final = 1.0;
    double picard_tol = 1e-10;
    int picard_max = 50;
    Scheme scheme = Scheme::semi_implicit_euler;
    ForcingSpec forcing;
};

class ValidatedConfig;

/// All invariant violations of `cfg`, empty when valid.
std::vector<std::string> config_violations(const SimConfig& cfg);

/// Normalizes and freezes a config; throws InvalidConfig listing every
/// violated invariant.
ValidatedConfig validate_config(const SimConfig& cfg);

/// A SimConfig that passed validation. Only obtainable via validate_config.
class ValidatedConfig {
public:
    const SimConfig& get() const { return cfg_; }
    const SimConfig* operator->() const { return &cfg_; }

private:
    friend ValidatedConfig validate_config(const SimConfig&);
    explicit ValidatedConfig(SimConfig cfg) : cfg_(std::move(cfg)) {}
    SimConfig cfg_;
};

/// Strict JSON codec: exactly the documented field names, unknown keys are
/// rejected at every level.
SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& cfg);

/// Reads and parses a config file. Unreadable file -> IoError; malformed
/// JSON or bad fields -> InvalidConfig.
SimConfig load_config_file(const std::string& path);

/// FNV-1a hash of the canonical JSON form, as fixed-width hex.
std::string config_hash(const SimConfig& cfg);

}  // namespace bfsi
