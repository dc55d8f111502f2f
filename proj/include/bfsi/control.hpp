#pragma once

#include <string>
#include <vector>

#include "bfsi/config.hpp"
#include "bfsi/errors.hpp"

namespace bfsi {

/// Time-only input signal for open-loop actuation. Builtins plus sampled
/// signals with linear interpolation (clamped outside the sample range).
class OpenLoopSignal {
public:
    static OpenLoopSignal zero();
    static OpenLoopSignal step(double amplitude, double t_on);
    static OpenLoopSignal sine(double amplitude, double omega);
    static OpenLoopSignal samples(std::vector<double> t, std::vector<double> u);

    double operator()(double t) const;

private:
    enum class Kind { zero, step, sine, samples };
    Kind kind_ = Kind::zero;
    double amplitude_ = 0.0;
    double param_ = 0.0;  // t_on or omega
    std::vector<double> t_, u_;
};

/// Input applied to the particle: target-seeking feedback, an open-loop
/// signal, or nothing.
struct ControlLaw {
    enum class Variant { feedback, open_loop, none };

    Variant variant = Variant::none;
    double K = 0.0;
    double h1 = 0.0;
    OpenLoopSignal signal;

    static ControlLaw feedback(double K, double h1);
    static ControlLaw open_loop(OpenLoopSignal signal);
    static ControlLaw none();
};

/// u(t,h): K*(h1 - h) for feedback, signal(t) for open loop, 0 otherwise.
double control_force(const ControlLaw& law, double t, double h);

/// Closed-form manufactured-solution sources together with the analytic
/// target they manufacture.
///
/// Both targets keep the interface velocity equal to the fluid trace at the
/// interface exactly, so the coupled kinematics hold without a source term:
///  - stationary_wave: interface fixed at `center`, one decaying sine arch
///    per subdomain (right arch scaled by `skew`), zero trace at the
///    interface.
///  - moving_bump: interface at center + amplitude*sin(omega t); the fluid
///    is trace * q(s) with q(s) = sin(pi s/2) in the per-subdomain
///    stretched coordinate, so the velocity gradient is continuous across
///    the interface.
///
/// particle_source already discounts the configured feedback evaluated on
/// the target path, so a forced run converges to the target under the same
/// control law it is configured with.
class MmsSources {
public:
    static MmsSources from_spec(const ForcingSpec& spec, double K, double h1);

    double h_star(double t) const;
    double g_star(double t) const;

    /// Target fluid velocity; branches split at h_star(t).
    double v_star(double t, double y) const;

    /// Fluid source, branch chosen by the sign of y - h_star(t).
    double fluid_source(double t, double y) const;
    /// One-sided evaluations for quadrature cells that straddle the interface.
    double fluid_source_left(double t, double y) const;
    double fluid_source_right(double t, double y) const;

    /// Particle force source F(t).
    double particle_source(double t) const;

private:
    MmsSources() = default;
    ForcingSpec spec_;
    double K_ = 0.0;
    double h1_ = 0.0;
};

}  // namespace bfsi
