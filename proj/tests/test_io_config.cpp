#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "normdyn/config.hpp"
#include "normdyn/errors.hpp"
#include "normdyn/io.hpp"

using namespace normdyn;

TEST_CASE("property: formatted doubles parse back to the same value") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 5000; ++i) {
        const double x = i % 2 ? u(rng) : std::ldexp(u(rng), static_cast<int>(rng() % 200) - 100);
        const std::string text = format_double(x);
        double back = 0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("sweep CSV has the fixed header and column order") {
    SweepTable t;
    t.axes = {SweepParam::reflection_reward};
    SweepRow row;
    row.r = 1.5;
    row.kappa = 1;
    row.beta = 0.1;
    row.frequencies = {0.25, 0.125, 0.5, 0.125};
    row.residual = 1e-17;
    t.rows.push_back(row);
    CHECK(sweep_csv(t) ==
          "r,kappa,beta,freq_RR,freq_RS,freq_O,freq_M,residual\n1.5,1,0.1,0.25,0.125,0.5,0.125,1e-17\n");
}

TEST_CASE("trace CSV uses strategy names in the header") {
    OccupancyTrace trace{{3, {1, 2}}, {4, {0, 3}}};
    std::ostringstream os;
    write_trace_csv(os, trace, {"R", "O"});
    CHECK(os.str() == "step,count_R,count_O\n3,1,2\n4,0,3\n");
}

TEST_CASE("stationary JSON record names frequencies by strategy") {
    const StationaryResult res = stationary(extended_matrix(reference_params()), 100, 0.1);
    const nlohmann::json j = to_json(res);
    CHECK(j["frequencies"]["O"].get<double>() == res.frequencies[kO]);
    CHECK(j["transition_matrix"].size() == 4);
    CHECK(j["residual"].get<double>() == res.diagnostics.residual);
}

TEST_CASE("key-value config parsing") {
    std::istringstream in(
        "# reference parameters\n"
        "a = 1.5\n"
        "--kappa=0.25   # flag-style key\n"
        "\n"
        "sigma = 0.5\n"
        "beta = 0.01, 0.1,0.5\n"
        "N = 50\n"
        "L = 3\n"
        "delta = 0.75\n");
    const KeyValueConfig cfg = KeyValueConfig::parse(in);
    ExtendedParams p = reference_params();
    cfg.apply(p);
    CHECK(p.a == 1.5);
    CHECK(p.reflection_effort == 0.25);
    CHECK(p.superficial_factor == 0.5);
    CHECK(p.legitimacy_cost == 0.75);
    CHECK(p.b == 0.0);
    CHECK(*cfg.get_list("beta") == std::vector<double>{0.01, 0.1, 0.5});
    CHECK(*cfg.get_integer("N") == 50);
    CHECK_FALSE(cfg.get_double("tau"));

    BaselineParams bp;
    cfg.apply(bp);
    CHECK(bp.learning_benefit == 3);
    CHECK(bp.legitimacy_cost == 0.75);
}

TEST_CASE("config errors name the offending line or key") {
    std::istringstream missing_eq("a = 1\nkappa 2\n");
    CHECK_THROWS_WITH_AS(KeyValueConfig::parse(missing_eq, "x.cfg"), "x.cfg:2: expected 'key = value'",
                         InvalidParameter);
    std::istringstream bad_number("a = one\n");
    const KeyValueConfig cfg = KeyValueConfig::parse(bad_number);
    CHECK_THROWS_AS(cfg.get_double("a"), InvalidParameter);
    std::istringstream bad_int("N = 2.5\n");
    CHECK_THROWS_AS(KeyValueConfig::parse(bad_int).get_integer("N"), InvalidParameter);
    CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/path.cfg"), Error);
}
