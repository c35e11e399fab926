#include <doctest.h>

#include <cstdlib>

#include "roa/config.hpp"
#include "roa/report.hpp"

using namespace roa;

TEST_CASE("empty text yields the all-defaults oracle config") {
    const ExperimentConfig cfg = parse_config_text("");
    CHECK(cfg.scenario == "oracle");
    CHECK(cfg.alpha == doctest::Approx(0.05));
    CHECK(cfg.mode == "eq21");
    CHECK(!cfg.gate_bias);
    CHECK(cfg.budget == 1000);
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK_THROWS_WITH_AS(parse_config_text("{\"budgets\": 10}"),
                         doctest::Contains("unknown key 'budgets'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("{\"ml\": {\"folds\": 5, \"fold\": 3}}"),
                         doctest::Contains("ml.fold"), std::invalid_argument);
}

TEST_CASE("constraint violations carry the field path") {
    CHECK_THROWS_WITH_AS(parse_config_text("{\"alpha\": 1.5}"), doctest::Contains("alpha"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("{\"budget\": 2}"), doctest::Contains("budget"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("{\"inventory\": {\"s\": 50, \"S\": 40}}"),
                         doctest::Contains("inventory.s"), std::invalid_argument);
}

TEST_CASE("type mismatches are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("{\"budget\": \"lots\"}"),
                         doctest::Contains("type mismatch"), std::invalid_argument);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    const char* text = R"({
      "scenario": "ml",
      "budget": 2000,
      "alpha": 0.1,
      "root_seed": 99,
      "macro_replications": 7,
      "mode": "eq22",
      "gate_bias": true,
      "methods": ["bias-corrected-vr", "repeated-cv"],
      "alloc": {"b1": 20, "r": 4, "b2": 3},
      "ml": {"kind": "complex", "noise": "high", "n": 64}
    })";
    const ExperimentConfig a = parse_config_text(text);
    const ExperimentConfig b = parse_config_text(serialize_config(a));
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(b.scenario == "ml");
    CHECK(b.alloc.b1.value() == 20);
    CHECK(b.ml.kind == "complex");
    CHECK(b.gate_bias);
}

TEST_CASE("round trip holds across fuzzed configs") {
    Rng rng(123);
    for (int i = 0; i < 50; ++i) {
        ExperimentConfig cfg;
        cfg.scenario = (i % 3 == 0) ? "oracle" : (i % 3 == 1 ? "inventory" : "ml");
        cfg.budget = 8 + static_cast<long>(rng.next_below(5000));
        cfg.alpha = 0.01 + 0.5 * rng.next_double();
        cfg.root_seed = rng.next_u64();
        cfg.macro_replications = 1 + static_cast<long>(rng.next_below(200));
        cfg.mode = (i % 2) ? "eq21" : "eq22";
        cfg.gate_bias = (i % 5) == 0;
        if (i % 4 == 0) cfg.alloc.b1 = 2 + static_cast<long>(rng.next_below(50));
        const ExperimentConfig back = parse_config_text(serialize_config(cfg));
        CHECK(serialize_config(back) == serialize_config(cfg));
    }
}

TEST_CASE("config hash is stable and seed-sensitive") {
    ExperimentConfig a = parse_config_text("{\"root_seed\": 5}");
    ExperimentConfig b = parse_config_text("{\"root_seed\": 5}");
    ExperimentConfig c = parse_config_text("{\"root_seed\": 6}");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("ROA_SEED environment variable overrides the config seed") {
    setenv("ROA_SEED", "424242", 1);
    const ExperimentConfig cfg = parse_config_text("{\"root_seed\": 5}");
    unsetenv("ROA_SEED");
    CHECK(cfg.root_seed == 424242);
}

TEST_CASE("provenance stamp carries the hash, seed and mode flags") {
    const ExperimentConfig cfg = parse_config_text("{\"mode\": \"eq22\", \"gate_bias\": true}");
    const Provenance p = make_provenance(cfg);
    CHECK(p.config_hash == config_hash(cfg));
    CHECK(p.root_seed == cfg.root_seed);
    CHECK(p.mode == "eq22");
    CHECK(p.gate_bias);
}
