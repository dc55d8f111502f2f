#include "bfsi/control.hpp"

#include <algorithm>
#include <cmath>

namespace bfsi {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

OpenLoopSignal OpenLoopSignal::zero() { return OpenLoopSignal(); }

OpenLoopSignal OpenLoopSignal::step(double amplitude, double t_on) {
    OpenLoopSignal s;
    s.kind_ = Kind::step;
    s.amplitude_ = amplitude;
    s.param_ = t_on;
    return s;
}

OpenLoopSignal OpenLoopSignal::sine(double amplitude, double omega) {
    OpenLoopSignal s;
    s.kind_ = Kind::sine;
    s.amplitude_ = amplitude;
    s.param_ = omega;
    return s;
}

OpenLoopSignal OpenLoopSignal::samples(std::vector<double> t, std::vector<double> u) {
    if (t.empty() || t.size() != u.size())
        throw DomainError("sampled signal needs equal-length nonempty t and u");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1]))
            throw DomainError("sampled signal times must be strictly increasing");
    }
    OpenLoopSignal s;
    s.kind_ = Kind::samples;
    s.t_ = std::move(t);
    s.u_ = std::move(u);
    return s;
}

double OpenLoopSignal::operator()(double t) const {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::step:
            return t >= param_ ? amplitude_ : 0.0;
        case Kind::sine:
            return amplitude_ * std::sin(param_ * t);
        case Kind::samples: {
            if (t <= t_.front()) return u_.front();
            if (t >= t_.back()) return u_.back();
            const auto it = std::upper_bound(t_.begin(), t_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - t_.begin());
            const double w = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
            return (1.0 - w) * u_[i - 1] + w * u_[i];
        }
    }
    return 0.0;
}

ControlLaw ControlLaw::feedback(double K, double h1) {
    if (!(K >= 0.0)) throw DomainError("feedback requires K >= 0");
    if (!(h1 > -1.0 && h1 < 1.0))
        throw DomainError("feedback requires h1 strictly inside (-1,1)");
    ControlLaw law;
    law.variant = Variant::feedback;
    law.K = K;
    law.h1 = h1;
    return law;
}

ControlLaw ControlLaw::open_loop(OpenLoopSignal signal) {
    ControlLaw law;
    law.variant = Variant::open_loop;
    law.signal = std::move(signal);
    return law;
}

ControlLaw ControlLaw::none() { return ControlLaw(); }

double control_force(const ControlLaw& law, double t, double h) {
    if (!(h > -1.0 && h < 1.0))
        throw DomainError("control_force: h outside (-1,1)");
    switch (law.variant) {
        case ControlLaw::Variant::feedback: {
            const double u = law.K * (law.h1 - h);
            return u == 0.0 ? 0.0 : u;  // normalize -0 for stable output
        }
        case ControlLaw::Variant::open_loop:
            return law.signal(t);
        case ControlLaw::Variant::none:
            return 0.0;
    }
    return 0.0;
}

MmsSources MmsSources::from_spec(const ForcingSpec& spec, double K, double h1) {
    if (!spec.present()) throw DomainError("MmsSources requires a forcing spec");
    MmsSources m;
    m.spec_ = spec;
    m.K_ = K;
    m.h1_ = h1;
    return m;
}

double MmsSources::h_star(double t) const {
    switch (spec_.kind) {
        case ForcingSpec::Kind::stationary_wave:
            return spec_.center;
        case ForcingSpec::Kind::moving_bump:
            return spec_.center + spec_.amplitude * std::sin(spec_.rate * t);
        case ForcingSpec::Kind::none:
            break;
    }
    return 0.0;
}

double MmsSources::g_star(double t) const {
    switch (spec_.kind) {
        case ForcingSpec::Kind::stationary_wave:
            return 0.0;
        case ForcingSpec::Kind::moving_bump:
            return spec_.amplitude * spec_.rate * std::cos(spec_.rate * t);
        case ForcingSpec::Kind::none:
            break;
    }
    return 0.0;
}

double MmsSources::v_star(double t, double y) const {
    const double h = h_star(t);
    if (spec_.kind == ForcingSpec::Kind::stationary_wave) {
        const double a = spec_.amplitude * std::exp(-spec_.rate * t);
        if (y <= h) return a * std::sin(kPi * (y + 1.0) / (1.0 + h));
        return a * spec_.skew * std::sin(kPi * (1.0 - y) / (1.0 - h));
    }
    // moving_bump: trace times q(s) = sin(pi s / 2) in the stretched
    // coordinate; q(1) = 1 and q'(1) = 0 keep the interface trace and the
    // gradient continuity exact.
    const double c = g_star(t);
    if (y <= h) {
        const double s = (y + 1.0) / (1.0 + h);
        return c * std::sin(0.5 * kPi * s);
    }
    const double r = (1.0 - y) / (1.0 - h);
    return c * std::sin(0.5 * kPi * r);
}

double MmsSources::fluid_source_left(double t, double y) const {
    const double h = h_star(t);
    const double len = 1.0 + h;
    if (spec_.kind == ForcingSpec::Kind::stationary_wave) {
        const double a = spec_.amplitude * std::exp(-spec_.rate * t);
        const double s = (y + 1.0) / len;
        const double v = a * std::sin(kPi * s);
        const double vy = a * kPi * std::cos(kPi * s) / len;
        const double vyy = -a * kPi * kPi * std::sin(kPi * s) / (len * len);
        return -spec_.rate * v + v * vy - vyy;
    }
    const double omega = spec_.rate;
    const double c = spec_.amplitude * omega * std::cos(omega * t);
    const double cdot = -spec_.amplitude * omega * omega * std::sin(omega * t);
    const double s = (y + 1.0) / len;
    const double q = std::sin(0.5 * kPi * s);
    const double dq = 0.5 * kPi * std::cos(0.5 * kPi * s);
    const double ddq = -0.25 * kPi * kPi * q;
    const double v = c * q;
    const double vy = c * dq / len;
    const double vyy = c * ddq / (len * len);
    const double vt = cdot * q - c * c * s * dq / len;
    return vt + v * vy - vyy;
}

double MmsSources::fluid_source_right(double t, double y) const {
    const double h = h_star(t);
    const double len = 1.0 - h;
    if (spec_.kind == ForcingSpec::Kind::stationary_wave) {
        const double a = spec_.amplitude * spec_.skew * std::exp(-spec_.rate * t);
        const double r = (1.0 - y) / len;
        const double v = a * std::sin(kPi * r);
        const double vy = -a * kPi * std::cos(kPi * r) / len;
        const double vyy = -a * kPi * kPi * std::sin(kPi * r) / (len * len);
        return -spec_.rate * v + v * vy - vyy;
    }
    const double omega = spec_.rate;
    const double c = spec_.amplitude * omega * std::cos(omega * t);
    const double cdot = -spec_.amplitude * omega * omega * std::sin(omega * t);
    const double r = (1.0 - y) / len;
    const double q = std::sin(0.5 * kPi * r);
    const double dq = 0.5 * kPi * std::cos(0.5 * kPi * r);
    const double ddq = -0.25 * kPi * kPi * q;
    const double v = c * q;
    const double vy = -c * dq / len;
    const double vyy = c * ddq / (len * len);
    const double vt = cdot * q + c * c * r * dq / len;
    return vt + v * vy - vyy;
}

double MmsSources::fluid_source(double t, double y) const {
    return (y <= h_star(t)) ? fluid_source_left(t, y) : fluid_source_right(t, y);
}

double MmsSources::particle_source(double t) const {
    const double h = h_star(t);
    const double u_on_target = K_ * (h1_ - h);
    if (spec_.kind == ForcingSpec::Kind::stationary_wave) {
        const double a = spec_.amplitude * std::exp(-spec_.rate * t);
        const double jump =
            a * spec_.skew * kPi / (1.0 - h) + a * kPi / (1.0 + h);
        return -jump - u_on_target;
    }
    // moving_bump: gradient is continuous across the interface, so the whole
    // particle acceleration comes from the source.
    const double omega = spec_.rate;
    const double hddot = -spec_.amplitude * omega * omega * std::sin(omega * t);
    return hddot - u_on_target;
}

}  // namespace bfsi
