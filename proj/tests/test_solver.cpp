#include <doctest.h>

#include <cmath>
#include <vector>

#include "bfsi/diagnostics.hpp"
#include "bfsi/solver.hpp"
#include "bfsi/verification.hpp"

using namespace bfsi;

namespace {

SimConfig equilibrium_config(Scheme scheme) {
    SimConfig cfg;
    cfg.K = 5.0;
    cfg.h0 = 0.4;
    cfg.h1 = 0.4;
    cfg.g0 = 0.0;
    cfg.n_cells = 16;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    cfg.scheme = scheme;
    return cfg;
}

SimConfig wave_config(double K, int n_cells, double dt, double t_final) {
    SimConfig cfg;
    cfg.K = K;
    cfg.h1 = 0.0;
    cfg.h0 = 0.2;
    cfg.g0 = 0.5;
    cfg.v0 = InitialVelocity::sin_pi(1.0);
    cfg.n_cells = n_cells;
    cfg.dt = dt;
    cfg.t_final = t_final;
    return cfg;
}

}  // namespace

TEST_CASE("equilibrium is a fixed point of both schemes") {
    for (Scheme scheme : {Scheme::semi_implicit_euler, Scheme::crank_nicolson_picard}) {
        CAPTURE(scheme_name(scheme));
        const ValidatedConfig cfg = validate_config(equilibrium_config(scheme));
        const Trajectory traj = run_simulation(cfg);
        for (const State& s : traj.states) {
            CHECK(s.h == 0.4);
            CHECK(s.g == 0.0);
            for (double v : s.v) CHECK(v == 0.0);
        }
        CHECK(traj.dissipation_cum.back() == 0.0);
        for (double u : traj.controls) CHECK(u == 0.0);
    }
}

TEST_CASE("zero data with zero gain stays at rest") {
    SimConfig cfg = equilibrium_config(Scheme::semi_implicit_euler);
    cfg.K = 0.0;
    cfg.h0 = 0.4;
    cfg.h1 = -0.2;  // irrelevant at K = 0
    const Trajectory traj = run_simulation(validate_config(cfg));
    CHECK(traj.back().h == 0.4);
    CHECK(traj.back().g == 0.0);
}

TEST_CASE("single-step particle kick matches the rigid-dynamics oracle") {
    // With v = 0 the first step reduces to the particle equation driven by
    // the frozen control u = K(h1 - h0); a tiny-dt reference integration of
    // that scalar dynamics gives g(dt) = u*dt to leading order.
    SimConfig cfg;
    cfg.K = 1.0;
    cfg.h1 = 0.0;
    cfg.h0 = 0.5;
    cfg.g0 = 0.0;
    cfg.n_cells = 64;
    cfg.dt = 1e-3;
    cfg.t_final = 1e-3;
    const ValidatedConfig vcfg = validate_config(cfg);
    const State s1 = step(initialize_state(vcfg), vcfg);

    // reference: g' = u, h' = g with u frozen at -0.5, integrated at dt/1000.
    // The coupled step adds viscous drag from the co-moving fluid, an
    // O(sqrt(dt)) effect the rigid oracle ignores, so agreement is ~10%.
    double g_ref = 0.0, h_ref = 0.5;
    const double u = -0.5;
    const double tau = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        g_ref += tau * u;
        h_ref += tau * g_ref;
    }
    CHECK(g_ref == doctest::Approx(-5e-4).epsilon(1e-6));
    CHECK(std::abs(s1.g - g_ref) < 5e-5);
    CHECK(h_ref == doctest::Approx(0.5 - 2.5e-7).epsilon(1e-6));
    CHECK(s1.h == 0.5 + cfg.dt * s1.g);  // discrete kinematics, exact
    CHECK(std::abs(s1.h - (0.5 - 5e-7)) < 5e-8);
    CHECK(s1.v[s1.particle_index()] == s1.g);
}

TEST_CASE("discrete compatibility holds exactly after every step") {
    const ValidatedConfig cfg = validate_config(wave_config(1.0, 32, 1e-3, 0.05));
    const Trajectory traj = run_simulation(cfg);
    for (const State& s : traj.states) {
        CHECK(s.v.front() == 0.0);
        CHECK(s.v.back() == 0.0);
        CHECK(s.v[s.particle_index()] == s.g);
    }
}

TEST_CASE("energy decays and satisfies the paper envelope at t = 2") {
    SimConfig raw = wave_config(0.0, 48, 1e-3, 2.0);
    raw.h0 = 0.0;
    raw.g0 = 0.0;
    const ValidatedConfig cfg = validate_config(raw);
    const Trajectory traj = run_simulation(cfg);
    const double e0 = compute_energy(traj.front(), 0.0, 0.0);
    const double eT = compute_energy(traj.back(), 0.0, 0.0);
    CHECK(eT < e0 * std::exp(-0.25 * 2.0));
    // monotone up to the documented per-step defect
    double prev = e0;
    for (const State& s : traj.states) {
        const double e = compute_energy(s, 0.0, 0.0);
        CHECK(e <= prev + 1e-10);
        prev = e;
    }
}

TEST_CASE("per-step energy defect is second order in dt") {
    // The residual increments of the discrete energy identity are the
    // per-step defects; their maximum scales like c*dt^2. The constant is
    // frozen from a calibration run of this exact scenario (measured 211
    // at dt = 1e-3, dominated by the relaxation of the initial trace kink).
    const double frozen_c = 400.0;
    for (double dt : {2e-3, 1e-3}) {
        const ValidatedConfig cfg = validate_config(wave_config(1.0, 32, dt, 0.5));
        const Trajectory traj = run_simulation(cfg);
        const std::vector<double> r = energy_identity_residual(traj, 1.0, 0.0);
        double max_step_defect = 0.0;
        for (std::size_t k = 1; k < r.size(); ++k) {
            max_step_defect = std::max(max_step_defect, std::abs(r[k] - r[k - 1]));
        }
        CHECK(max_step_defect <= frozen_c * dt * dt);
    }
}

TEST_CASE("trapezoid dissipation option stays close to the rectangle rule") {
    const ValidatedConfig cfg = validate_config(wave_config(0.0, 32, 1e-3, 0.5));
    const Trajectory rect = run_simulation(cfg);
    RunOptions opt;
    opt.trapezoid_dissipation = true;
    const Trajectory trap = run_simulation(cfg, opt);
    CHECK(trap.dissipation_cum.back() ==
          doctest::Approx(rect.dissipation_cum.back()).epsilon(0.02));
}

TEST_CASE("Picard scheme converges and agrees with the Euler scheme") {
    SimConfig be = wave_config(1.0, 32, 1e-3, 0.25);
    SimConfig cn = be;
    cn.scheme = Scheme::crank_nicolson_picard;
    cn.picard_tol = 1e-12;
    cn.picard_max = 60;
    const Trajectory a = run_simulation(validate_config(be));
    const Trajectory b = run_simulation(validate_config(cn));
    CHECK(a.back().h == doctest::Approx(b.back().h).epsilon(2e-3));
    CHECK(a.back().g == doctest::Approx(b.back().g).epsilon(5e-2));
}

TEST_CASE("Picard iteration cap raises NonConvergence") {
    SimConfig cfg = wave_config(1.0, 32, 0.05, 0.05);
    cfg.scheme = Scheme::crank_nicolson_picard;
    cfg.picard_tol = 1e-14;
    cfg.picard_max = 1;
    CHECK_THROWS_AS(run_simulation(validate_config(cfg)), NonConvergence);
}

TEST_CASE("a runaway interface aborts loudly") {
    SimConfig cfg;
    cfg.K = 0.0;
    cfg.h0 = 0.95;
    cfg.h1 = 0.0;
    cfg.g0 = 0.0;
    cfg.n_cells = 16;
    cfg.dt = 0.05;
    cfg.t_final = 10.0;
    const ValidatedConfig vcfg = validate_config(cfg);
    const ControlLaw shove = ControlLaw::open_loop(OpenLoopSignal::step(50.0, 0.0));
    CHECK_THROWS_AS(run_simulation(vcfg, shove), CollisionAbort);
    try {
        run_simulation(vcfg, shove);
    } catch (const CollisionAbort& e) {
        CHECK(e.t > 0.0);
        CHECK(std::string(e.what()).find("t =") != std::string::npos);
    }
}

TEST_CASE("final state converges under refinement at first order or better") {
    const SimConfig base = wave_config(0.0, 16, 4e-3, 0.5);
    const RefinementStudy study = run_self_convergence_study(base, 3, 4);
    REQUIRE(study.errors.size() == 3);
    CHECK(study.errors[0] > study.errors[1]);
    CHECK(study.errors[1] > study.errors[2]);
    CHECK(study.observed_order >= 1.0);
}

TEST_CASE("open-loop and disabled control run through the same path") {
    SimConfig cfg = wave_config(0.0, 16, 1e-3, 0.02);
    const ValidatedConfig vcfg = validate_config(cfg);
    const Trajectory none = run_simulation(vcfg, ControlLaw::none());
    const Trajectory zero = run_simulation(vcfg, ControlLaw::open_loop(OpenLoopSignal::zero()));
    CHECK(none.back().h == zero.back().h);
    CHECK(none.back().g == zero.back().g);
}
