#include "bfsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "bfsi/control.hpp"
#include "bfsi/geometry.hpp"
#include "bfsi/grid.hpp"
#include "bfsi/kernels.hpp"
#include "bfsi/operators.hpp"

namespace bfsi {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct StateQuadrature {
    explicit StateQuadrature(const State& s)
        : grid((static_cast<int>(s.v.size()) - 1) / 2),
          geom(s.h),
          ops(assemble(grid, geom)) {}

    ReferenceGrid grid;
    GeometrySnapshot geom;
    AssembledOperators ops;
};

std::vector<double> phi_nodes(const ReferenceGrid& grid) {
    std::vector<double> phi(grid.n_nodes);
    for (std::size_t i = 0; i < grid.n_nodes; ++i) phi[i] = 1.0 - std::abs(grid.xi[i]);
    return phi;
}

}  // namespace

double fluid_l2_sq(const State& s) {
    const StateQuadrature q(s);
    return kernels::weighted_norm_sq(q.ops.fluid_mass, s.v);
}

double compute_energy(const State& s, double K, double h1) {
    const double dh = s.h - h1;
    return fluid_l2_sq(s) + s.g * s.g + K * dh * dh;
}

double dissipation_rate(const State& s) {
    const StateQuadrature q(s);
    return kernels::diff_sq_weighted(s.v, q.ops.inv_dy);
}

double compute_P(const State& s) {
    const StateQuadrature q(s);
    const std::vector<double> phi = phi_nodes(q.grid);
    return kernels::weighted_dot(q.ops.fluid_mass, phi, s.v) + s.g;
}

std::pair<double, double> compute_A1_A2(const State& s) {
    const StateQuadrature q(s);
    const std::size_t ip = q.grid.particle_index;
    const std::size_t n = q.grid.n_nodes;
    const double dy_left = q.grid.dxi * q.geom.j_left;
    const double dy_right = q.grid.dxi * q.geom.j_right;
    const std::vector<double> y = physical_nodes(q.grid, s.h);

    // Subdomain trapezoids of v(1+y) and v(1-y).
    double left_integral = 0.0;
    for (std::size_t i = 0; i <= ip; ++i) {
        const double w = (i == 0 || i == ip) ? 0.5 * dy_left : dy_left;
        left_integral += w * s.v[i] * (1.0 + y[i]);
    }
    double right_integral = 0.0;
    for (std::size_t i = ip; i < n; ++i) {
        const double w = (i == ip || i == n - 1) ? 0.5 * dy_right : dy_right;
        right_integral += w * s.v[i] * (1.0 - y[i]);
    }
    const double a1 = -s.g / (q.geom.j_left * q.geom.j_left) * left_integral +
                      s.g / (q.geom.j_right * q.geom.j_right) * right_integral;

    // A2: elementwise, the gradient is constant per element so the element
    // length cancels against the trapezoid weight.
    const std::vector<double> phi = phi_nodes(q.grid);
    double a2 = 0.0;
    for (std::size_t e = 0; e + 1 < n; ++e) {
        const double dv = s.v[e + 1] - s.v[e];
        a2 += 0.5 * dv * (s.v[e] * phi[e] + s.v[e + 1] * phi[e + 1]);
    }
    return {a1, a2};
}

double compute_jump(const State& s) {
    const std::size_t ip = s.particle_index();
    const int n_cells = static_cast<int>(ip);
    const double dxi = 1.0 / static_cast<double>(n_cells);
    const double dy_left = dxi * (1.0 + s.h);
    const double dy_right = dxi * (1.0 - s.h);
    return (s.v[ip + 1] - s.v[ip]) / dy_right - (s.v[ip] - s.v[ip - 1]) / dy_left;
}

double lyapunov_V(const State& s, double eps, double K, double h1) {
    const double eps_max = std::min(0.125, K / 8.0);
    if (!(eps >= 0.0 && eps <= eps_max * (1.0 + 1e-12))) {
        throw DomainError("eps = " + std::to_string(eps) +
                          " outside [0, min(1/8, K/8)]");
    }
    return compute_energy(s, K, h1) - eps * (h1 - s.h) * compute_P(s);
}

AppendixFunctionals appendix_functionals(const State& s, double K, double h1) {
    AppendixFunctionals f;
    f.W1 = 0.5 * (fluid_l2_sq(s) + s.g * s.g);
    const double dh = s.h - h1;
    f.W2 = 0.5 * K * dh * dh;
    f.D = dissipation_rate(s);
    return f;
}

double empirical_alpha(const Trajectory& traj) {
    if (traj.states.empty()) throw DomainError("empirical_alpha needs a nonempty trajectory");
    double alpha = 2.0;
    for (const State& s : traj.states) {
        alpha = std::min(alpha, std::min(1.0 - s.h, 1.0 + s.h));
    }
    return alpha;
}

StabilityConstants stability_constants(const ValidatedConfig& cfg, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha = " + std::to_string(alpha) + " outside (0,1]");
    const SimConfig& c = cfg.get();
    const State s0 = initialize_state(cfg);
    const double dh = c.h1 - c.h0;
    StabilityConstants sc;
    sc.alpha = alpha;
    sc.Q = fluid_l2_sq(s0) + c.g0 * c.g0 + c.K * dh * dh;
    sc.C = 10.0 * (sc.Q + std::sqrt(sc.Q));
    if (c.K > 0.0) {
        const double denom = 34.0 + 2.0 / (c.K * alpha * alpha);
        sc.eps = 1.0 / (16.0 * denom);
        sc.eta = 0.25 * std::min(1.0 / denom, 0.75 * c.K * sc.eps);
    } else {
        sc.eps = 0.0;
        sc.eta = 0.25;
    }
    return sc;
}

double CorridorBounds::kappa1(double t) const {
    return 2.0 / (1.0 + m1 * std::exp(C + two_K * t));
}

double CorridorBounds::kappa2(double t) const {
    return 2.0 / (1.0 + m2 * std::exp(C + two_K * t));
}

CorridorBounds corridor_bounds(const ValidatedConfig& cfg) {
    const SimConfig& c = cfg.get();
    const StabilityConstants sc = stability_constants(cfg, 1.0);
    CorridorBounds b;
    b.C = sc.C;
    b.two_K = 2.0 * c.K;
    b.m1 = std::max(2.0, (1.0 - c.h0) / (1.0 + c.h0));
    b.m2 = std::max(2.0, (1.0 + c.h0) / (1.0 - c.h0));
    return b;
}

std::pair<double, double> kappa_bounds(const ValidatedConfig& cfg, double t) {
    if (!(t >= 0.0)) throw DomainError("kappa_bounds requires t >= 0");
    const CorridorBounds b = corridor_bounds(cfg);
    return {b.kappa1(t), b.kappa2(t)};
}

std::vector<double> energy_identity_residual(const Trajectory& traj, double K,
                                             double h1) {
    std::vector<double> r(traj.size());
    if (traj.states.empty()) return r;
    const double e0 = compute_energy(traj.front(), K, h1);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        r[k] = compute_energy(traj.states[k], K, h1) + traj.dissipation_cum[k] - e0;
    }
    return r;
}

double max_energy_identity_residual(const Trajectory& traj, double K, double h1) {
    double m = 0.0;
    for (double r : energy_identity_residual(traj, K, h1)) m = std::max(m, std::abs(r));
    return m;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> E,
                   double window_start, double window_end) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_start || t[i] > window_end) continue;
        if (!(E[i] > 0.0)) {
            throw DegenerateFit("energy not positive at t = " + std::to_string(t[i]));
        }
        xs.push_back(t[i]);
        ys.push_back(-std::log(E[i]));
    }
    if (xs.size() < 3) {
        throw DegenerateFit("fit window holds " + std::to_string(xs.size()) +
                            " samples, need at least 3");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("degenerate time window");
    DecayFit fit;
    fit.rate = sxy / sxx;
    fit.intercept = my + fit.rate * (window_start - mx);
    fit.n_samples = static_cast<int>(xs.size());
    return fit;
}

int count_envelope_violations(std::span<const double> t,
                              std::span<const double> value, double bound,
                              double rate, double rel_slack) {
    int violations = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double envelope = bound * std::exp(-rate * t[i]);
        if (value[i] > envelope * (1.0 + rel_slack)) ++violations;
    }
    return violations;
}

HStarResult h_star_estimate(const Trajectory& traj, const ValidatedConfig& cfg) {
    if (cfg->K != 0.0)
        throw NotApplicable("h* estimation applies to the K = 0 regime only");
    if (traj.states.empty()) throw DomainError("empty trajectory");

    const double t_final = traj.back().t;
    const double margin = std::min(10.0, 0.25 * t_final);
    HStarResult res;
    res.h_star = traj.back().h;
    res.window_end = t_final - margin;
    res.violations_theorem = 0;
    res.violations_proof_tail = 0;

    const State& s0 = traj.front();
    const double q0 = fluid_l2_sq(s0) + s0.g * s0.g;  // ||v0||^2 + g0^2
    const double tail_coeff = std::sqrt(q0) / 8.0;
    constexpr double slack = 1e-6;

    for (const State& s : traj.states) {
        if (s.t > res.window_end) break;
        const double gap = std::abs(s.h - res.h_star);
        if (gap * gap > q0 * std::exp(-0.25 * s.t) * (1.0 + slack))
            ++res.violations_theorem;
        if (gap > tail_coeff * std::exp(-0.125 * s.t) * (1.0 + slack))
            ++res.violations_proof_tail;
    }
    return res;
}

std::vector<DiagnosticsRecord> evaluate_trajectory(const Trajectory& traj,
                                                   const ValidatedConfig& cfg,
                                                   const StabilityConstants& sc) {
    const SimConfig& c = cfg.get();
    const CorridorBounds corridor = corridor_bounds(cfg);
    const std::vector<double> residual = energy_identity_residual(traj, c.K, c.h1);

    std::vector<DiagnosticsRecord> out;
    out.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const State& s = traj.states[k];
        DiagnosticsRecord r;
        r.t = s.t;
        r.E = compute_energy(s, c.K, c.h1);
        r.P = compute_P(s);
        const auto [a1, a2] = compute_A1_A2(s);
        r.A1 = a1;
        r.A2 = a2;
        r.V_eps = r.E - sc.eps * (c.h1 - s.h) * r.P;
        r.jump = compute_jump(s);
        r.kappa1 = corridor.kappa1(s.t);
        r.kappa2 = corridor.kappa2(s.t);
        r.u = (k < traj.controls.size()) ? traj.controls[k]
                                         : c.K * (c.h1 - s.h);
        const AppendixFunctionals ap = appendix_functionals(s, c.K, c.h1);
        r.W1 = ap.W1;
        r.W2 = ap.W2;
        r.D = ap.D;
        r.diss_cum = traj.dissipation_cum[k];
        r.residual = residual[k];
        out.push_back(r);
    }
    return out;
}

std::vector<TestPair> default_test_family() {
    std::vector<TestPair> family;
    family.push_back({"tent",
                      [](double xi) { return 1.0 - std::abs(xi); },
                      [](double xi) { return xi < 0.0 ? 1.0 : -1.0; },
                      [](double) { return 1.0; },
                      [](double) { return 0.0; }});
    family.push_back({"parabola",
                      [](double xi) { return 1.0 - xi * xi; },
                      [](double xi) { return -2.0 * xi; },
                      [](double) { return 1.0; },
                      [](double) { return 0.0; }});
    family.push_back({"cosine_decay",
                      [](double xi) { return std::cos(0.5 * kPi * xi); },
                      [](double xi) { return -0.5 * kPi * std::sin(0.5 * kPi * xi); },
                      [](double t) { return std::exp(-0.5 * t); },
                      [](double t) { return -0.5 * std::exp(-0.5 * t); }});
    family.push_back({"odd_cubic",
                      [](double xi) { return xi * (1.0 - xi * xi); },
                      [](double xi) { return 1.0 - 3.0 * xi * xi; },
                      [](double t) { return std::cos(t); },
                      [](double t) { return -std::sin(t); }});
    family.push_back({"quartic_rational",
                      [](double xi) { return (1.0 - xi * xi) * (1.0 - xi * xi); },
                      [](double xi) { return -4.0 * xi * (1.0 - xi * xi); },
                      [](double t) { return 1.0 / (1.0 + t); },
                      [](double t) { return -1.0 / ((1.0 + t) * (1.0 + t)); }});
    return family;
}

namespace {

/// Per-sample integrands of the weak identity for one test pair.
struct WeakTerms {
    double mass;     // int v psi
    double trace;    // g l
    double i_vpsidot;
    double i_gldot;
    double i_grad;
    double i_conv;
    double i_load;   // u l + sources
};

WeakTerms weak_terms(const State& s, const TestPair& tp, const SimConfig& c,
                     const MmsSources* mms) {
    const StateQuadrature q(s);
    const ReferenceGrid& grid = q.grid;
    const std::size_t n = grid.n_nodes;
    const std::size_t ip = grid.particle_index;
    const double at = tp.a(s.t);
    const double dat = tp.da(s.t);
    const double l = tp.p(0.0) * at;

    std::vector<double> p(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = tp.p(grid.xi[i]);
        w[i] = mesh_velocity(grid.xi[i], s.g);
    }

    WeakTerms tm{};
    tm.mass = at * kernels::weighted_dot(q.ops.fluid_mass, p, s.v);
    tm.trace = s.g * l;
    tm.i_gldot = s.g * tp.p(0.0) * dat;

    double adv = 0.0, grad = 0.0, conv = 0.0;
    for (std::size_t e = 0; e + 1 < n; ++e) {
        const double j = (e < ip) ? q.geom.j_left : q.geom.j_right;
        const double dy = grid.dxi * j;
        const double xi_mid = 0.5 * (grid.xi[e] + grid.xi[e + 1]);
        const double dpj = tp.dp(xi_mid) / j;  // psi_y / a
        adv += dpj * 0.5 * dy * (s.v[e] * w[e] + s.v[e + 1] * w[e + 1]);
        grad += dpj * (s.v[e + 1] - s.v[e]);
        conv += dpj * 0.5 * dy * (s.v[e] * s.v[e] + s.v[e + 1] * s.v[e + 1]);
    }
    tm.i_vpsidot = -at * adv + dat * kernels::weighted_dot(q.ops.fluid_mass, p, s.v);
    tm.i_grad = at * grad;
    tm.i_conv = 0.5 * at * conv;

    const double u = c.K * (c.h1 - s.h);
    tm.i_load = u * l;
    if (mms) {
        const std::vector<double> y = physical_nodes(grid, s.h);
        double fluid = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (i == ip) continue;
            fluid += q.ops.fluid_mass[i] * p[i] * mms->fluid_source(s.t, y[i]);
        }
        fluid += p[ip] * (0.5 * grid.dxi * q.geom.j_left *
                              mms->fluid_source_left(s.t, y[ip]) +
                          0.5 * grid.dxi * q.geom.j_right *
                              mms->fluid_source_right(s.t, y[ip]));
        tm.i_load += at * fluid + mms->particle_source(s.t) * l;
    }
    return tm;
}

}  // namespace

std::vector<std::vector<double>> weak_residual(const Trajectory& traj,
                                               const ValidatedConfig& cfg,
                                               std::span<const TestPair> family) {
    const SimConfig& c = cfg.get();
    std::optional<MmsSources> mms;
    if (c.forcing.present()) mms = MmsSources::from_spec(c.forcing, c.K, c.h1);

    std::vector<std::vector<double>> residuals;
    residuals.reserve(family.size());
    for (const TestPair& tp : family) {
        std::vector<double> series(traj.size(), 0.0);
        WeakTerms prev{};
        WeakTerms first{};
        double acc = 0.0;  // cumulative trapezoid of the time integrands
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const WeakTerms cur =
                weak_terms(traj.states[k], tp, c, mms ? &*mms : nullptr);
            if (k == 0) {
                first = cur;
            } else {
                const double half_dt = 0.5 * (traj.states[k].t - traj.states[k - 1].t);
                auto integrand = [](const WeakTerms& t) {
                    return -t.i_gldot - t.i_vpsidot + t.i_grad - t.i_conv - t.i_load;
                };
                acc += half_dt * (integrand(prev) + integrand(cur));
            }
            const double r = cur.mass - first.mass + cur.trace - first.trace + acc;
            if (!std::isfinite(r)) {
                throw QuadratureError("non-finite weak residual for test '" +
                                      tp.name + "' at t = " +
                                      std::to_string(traj.states[k].t));
            }
            series[k] = r;
            prev = cur;
        }
        residuals.push_back(std::move(series));
    }
    return residuals;
}

double max_weak_residual(const Trajectory& traj, const ValidatedConfig& cfg,
                         std::span<const TestPair> family) {
    double m = 0.0;
    for (const auto& series : weak_residual(traj, cfg, family)) {
        for (double r : series) m = std::max(m, std::abs(r));
    }
    return m;
}

}  // namespace bfsi
