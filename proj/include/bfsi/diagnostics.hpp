#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bfsi/config.hpp"
#include "bfsi/state.hpp"

namespace bfsi {

/// Quadrature convention: composite trapezoid on the reference grid with
/// per-subdomain Jacobian weights, one-sided derivatives at the interface
/// node. With the lumped mass used by the scheme, the trapezoid energy is
/// exactly the discrete energy the time stepper dissipates.

/// E = int v^2 dy + g^2 + K (h - h1)^2
double compute_energy(const State& s, double K, double h1);

/// int v^2 dy alone (trapezoid with Jacobians).
double fluid_l2_sq(const State& s);

/// D = int v_y^2 dy, exact for the piecewise-linear space.
double dissipation_rate(const State& s);

/// P = int phi(.,h) v dy + g
double compute_P(const State& s);

/// A1 = -g/(1+h)^2 int_{-1}^{h} v (1+y) dy + g/(1-h)^2 int_{h}^{1} v (1-y) dy
/// A2 = int v v_y phi dy (elementwise, one-sided at the interface)
std::pair<double, double> compute_A1_A2(const State& s);

/// One-sided velocity-gradient difference across the interface node.
double compute_jump(const State& s);

/// V_eps = E - eps (h1 - h) P. eps must satisfy 0 <= eps <= min(1/8, K/8).
double lyapunov_V(const State& s, double eps, double K, double h1);

struct AppendixFunctionals {
    double W1;  // (int v^2 + g^2)/2
    double W2;  // K (h-h1)^2 / 2
    double D;   // int v_y^2
};
AppendixFunctionals appendix_functionals(const State& s, double K, double h1);

/// Smallest wall clearance observed along a trajectory:
/// min_t min{1 - h(t), 1 + h(t)}.
double empirical_alpha(const Trajectory& traj);

struct StabilityConstants {
    double Q;      // ||v0||^2 + g0^2 + K (h1-h0)^2, trapezoid on the initial state
    double C;      // 10 (Q + sqrt(Q))
    double alpha;  // wall-clearance lower bound used for eps/eta
    double eps;    // perturbation size; 0 when K = 0
    double eta;    // decay rate; 1/4 when K = 0
};

/// Evaluates the closed-form constants for a given wall clearance alpha in
/// (0,1]. Throws DomainError for alpha outside (0,1].
StabilityConstants stability_constants(const ValidatedConfig& cfg, double alpha);

/// Time-dependent corridor widths: the particle provably stays inside
/// [-1 + kappa1(t), 1 - kappa2(t)].
std::pair<double, double> kappa_bounds(const ValidatedConfig& cfg, double t);

/// Precomputed corridor evaluator for sampling many times cheaply.
struct CorridorBounds {
    double C;
    double two_K;
    double m1;  // max{2, (1-h0)/(1+h0)}
    double m2;  // max{2, (1+h0)/(1-h0)}
    double kappa1(double t) const;
    double kappa2(double t) const;
};
CorridorBounds corridor_bounds(const ValidatedConfig& cfg);

/// r(t_k) = E(t_k) + dissipation_cum(t_k) - E(0) for every recorded state.
std::vector<double> energy_identity_residual(const Trajectory& traj, double K,
                                             double h1);
double max_energy_identity_residual(const Trajectory& traj, double K, double h1);

struct DecayFit {
    double rate;       // least-squares slope of -log E over the window
    double intercept;  // -log E at window start per the fit
    int n_samples;
};

/// Fits -log E versus t on [window_start, window_end]. Throws DegenerateFit
/// if fewer than 3 samples fall in the window or E is not positive there.
DecayFit decay_fit(std::span<const double> t, std::span<const double> E,
                   double window_start, double window_end);

/// Counts samples with value > bound * exp(-rate * t) * (1 + rel_slack).
int count_envelope_violations(std::span<const double> t,
                              std::span<const double> value, double bound,
                              double rate, double rel_slack = 1e-6);

struct HStarResult {
    double h_star;                 // h(t_final)
    int violations_theorem;        // against exp(-t/4) (||v0||^2 + g0^2)
    int violations_proof_tail;     // against (sqrt(E0)/8) exp(-t/8)
    double window_end;             // t_final - margin
};

/// K = 0 only (NotApplicable otherwise): takes h(t_final) as the limit
/// position and checks both decay envelopes for |h(t) - h*| on
/// [0, t_final - margin], margin = min(10, t_final/4).
HStarResult h_star_estimate(const Trajectory& traj, const ValidatedConfig& cfg);

/// All recorded functionals at one sample time.
struct DiagnosticsRecord {
    double t;
    double E;
    double P;
    double A1;
    double A2;
    double V_eps;
    double jump;
    double kappa1;
    double kappa2;
    double u;
    double W1;
    double W2;
    double D;
    double diss_cum;
    double residual;  // energy identity residual
};

std::vector<DiagnosticsRecord> evaluate_trajectory(const Trajectory& traj,
                                                   const ValidatedConfig& cfg,
                                                   const StabilityConstants& sc);

/// Weak-form test pair: a reference-domain profile p(xi) (zero at the
/// walls) times a time factor a(t). The interface trace is p(0) a(t) by
/// construction. dp is evaluated only at element midpoints, so kinked
/// profiles are fine.
struct TestPair {
    std::string name;
    std::function<double(double)> p;
    std::function<double(double)> dp;
    std::function<double(double)> a;
    std::function<double(double)> da;
};

/// The built-in five-member family (first member: the interface tent with
/// a constant-in-time factor).
std::vector<TestPair> default_test_family();

/// Residual of the integrated weak identity per test pair per sample time.
/// Time integrals use the trapezoid rule over the recorded samples.
std::vector<std::vector<double>> weak_residual(const Trajectory& traj,
                                               const ValidatedConfig& cfg,
                                               std::span<const TestPair> family);

double max_weak_residual(const Trajectory& traj, const ValidatedConfig& cfg,
                         std::span<const TestPair> family);

}  // namespace bfsi
