#include <doctest.h>

#include <cmath>

#include "bfsi/config.hpp"

using namespace bfsi;

namespace {

SimConfig basic_config() {
    SimConfig cfg;
    cfg.K = 1.0;
    cfg.h0 = 0.0;
    cfg.h1 = 0.5;
    cfg.n_cells = 32;
    cfg.dt = 1e-3;
    cfg.t_final = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("validate_config accepts a well-formed config") {
    CHECK_NOTHROW(validate_config(basic_config()));
}

TEST_CASE("validate_config rejects out-of-range fields") {
    SimConfig cfg = basic_config();
    cfg.h0 = 1.0;
    CHECK_THROWS_WITH_AS(validate_config(cfg),
                         doctest::Contains("h0 must lie strictly inside (-1,1)"),
                         InvalidConfig);

    cfg = basic_config();
    cfg.K = -0.5;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("K >= 0 required"),
                         InvalidConfig);

    cfg = basic_config();
    cfg.n_cells = 3;
    CHECK_FALSE(config_violations(cfg).empty());

    cfg = basic_config();
    cfg.dt = 0.0;
    CHECK_FALSE(config_violations(cfg).empty());

    cfg = basic_config();
    cfg.t_final = 1e-4;  // below dt
    CHECK_FALSE(config_violations(cfg).empty());
}

TEST_CASE("validate_config collects every violation") {
    SimConfig cfg = basic_config();
    cfg.h0 = -2.0;
    cfg.K = -1.0;
    cfg.n_cells = 0;
    const auto violations = config_violations(cfg);
    CHECK(violations.size() >= 3);
}

TEST_CASE("non-finite v0 is rejected") {
    SimConfig cfg = basic_config();
    cfg.v0 = InitialVelocity::custom(
        [](double y) { return y == 0.0 ? std::numeric_limits<double>::infinity() : 0.0; });
    // h0 = 0 puts a node exactly at y = 0.
    CHECK_FALSE(config_violations(cfg).empty());
}

TEST_CASE("sample vector length must match the grid") {
    SimConfig cfg = basic_config();
    cfg.v0 = InitialVelocity::nodal(std::vector<double>(10, 0.0));
    CHECK_FALSE(config_violations(cfg).empty());
    cfg.v0 = InitialVelocity::nodal(std::vector<double>(65, 0.0));
    CHECK(config_violations(cfg).empty());
}

TEST_CASE("JSON round trip preserves the config") {
    SimConfig cfg = basic_config();
    cfg.v0 = InitialVelocity::sin_pi(0.7);
    cfg.scheme = Scheme::crank_nicolson_picard;
    const nlohmann::json j = config_to_json(cfg);
    const SimConfig back = config_from_json(j);
    CHECK(back.K == cfg.K);
    CHECK(back.h1 == cfg.h1);
    CHECK(back.v0.kind == InitialVelocity::Kind::sin_pi);
    CHECK(back.v0.amplitude == 0.7);
    CHECK(back.scheme == Scheme::crank_nicolson_picard);
    CHECK(config_to_json(back) == j);
}

TEST_CASE("forcing round trip and coupling rules") {
    SimConfig cfg = basic_config();
    cfg.K = 0.0;
    cfg.forcing = ForcingSpec::moving_bump(0.1, 0.1, 1.0);
    cfg.v0 = InitialVelocity::mms_target();
    cfg.h0 = 0.1;
    cfg.g0 = 0.1;
    CHECK(config_violations(cfg).empty());

    const nlohmann::json j = config_to_json(cfg);
    const SimConfig back = config_from_json(j);
    CHECK(back.forcing.kind == ForcingSpec::Kind::moving_bump);
    CHECK(back.forcing.center == 0.1);

    // forcing without mms_target v0 is inconsistent
    SimConfig bad = cfg;
    bad.v0 = InitialVelocity::zero();
    CHECK_FALSE(config_violations(bad).empty());

    // mms_target v0 without forcing is inconsistent
    bad = basic_config();
    bad.v0 = InitialVelocity::mms_target();
    CHECK_FALSE(config_violations(bad).empty());

    // initial data must sit on the target path
    bad = cfg;
    bad.g0 = 0.0;
    CHECK_FALSE(config_violations(bad).empty());
}

TEST_CASE("unknown JSON keys are rejected") {
    nlohmann::json j = config_to_json(basic_config());
    j["viscosity"] = 2.0;
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("unknown key"),
                         InvalidConfig);

    nlohmann::json j2 = config_to_json(basic_config());
    j2["v0"]["frequency"] = 3.0;
    CHECK_THROWS_AS(config_from_json(j2), InvalidConfig);
}

TEST_CASE("missing and malformed config files") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/path/cfg.json"), IoError);
}

TEST_CASE("config hash is stable and input-sensitive") {
    const SimConfig a = basic_config();
    SimConfig b = basic_config();
    CHECK(config_hash(a) == config_hash(b));
    b.dt = 2e-3;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}
