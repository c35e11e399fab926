#include "roa/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace roa {

using nlohmann::json;

BetaMode ExperimentConfig::beta_mode() const {
    if (mode == "eq21") return BetaMode::eq21;
    if (mode == "eq22") return BetaMode::eq22_literal;
    throw std::invalid_argument("config: mode must be eq21 or eq22");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& path, const std::string& why) {
        throw std::invalid_argument("config: " + path + ": " + why);
    };
    if (scenario != "oracle" && scenario != "inventory" && scenario != "ml")
        fail("scenario", "must be oracle, inventory or ml");
    if (budget < 8) fail("budget", "must be >= 8");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", "must be in (0, 1)");
    if (macro_replications < 1) fail("macro_replications", "must be >= 1");
    if (mode != "eq21" && mode != "eq22") fail("mode", "must be eq21 or eq22");
    if (threads < 0) fail("threads", "must be >= 0");
    if (inventory.n < 1) fail("inventory.n", "must be >= 1");
    if (inventory.periods < 1) fail("inventory.periods", "must be >= 1");
    if (inventory.warmup < 0) fail("inventory.warmup", "must be >= 0");
    if (!(inventory.s >= 0 && inventory.s < inventory.S)) fail("inventory.s", "need 0 <= s < S");
    if (inventory.generator != "perfect" && inventory.generator != "corrupt" &&
        inventory.generator != "zero")
        fail("inventory.generator", "must be perfect, corrupt or zero");
    if (ml.kind != "linear" && ml.kind != "polynomial" && ml.kind != "complex")
        fail("ml.kind", "must be linear, polynomial or complex");
    if (ml.noise != "low" && ml.noise != "high") fail("ml.noise", "must be low or high");
    if (ml.n < 4) fail("ml.n", "must be >= 4");
    if (ml.learner != "ols" && ml.learner != "constant")
        fail("ml.learner", "must be ols or constant");
    if (ml.folds < 2) fail("ml.folds", "must be >= 2");
    if (ml.repeats < 2) fail("ml.repeats", "must be >= 2");
    if (oracle.k < 1) fail("oracle.k", "must be >= 1");
    if (oracle.power != 1 && oracle.power != 2) fail("oracle.power", "must be 1 or 2");
    if (oracle.n < 2) fail("oracle.n", "must be >= 2");
    if (oracle.sigma <= 0) fail("oracle.sigma", "must be > 0");
    if (alloc.b1 && *alloc.b1 < 1) fail("alloc.b1", "must be >= 1");
    if (alloc.r && *alloc.r < 1) fail("alloc.r", "must be >= 1");
    if (alloc.b2 && *alloc.b2 < 0) fail("alloc.b2", "must be >= 0");
    if (alloc.m && *alloc.m < 2) fail("alloc.m", "must be >= 2");
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + path + it.key() + "'");
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument("config: " + path + key + ": type mismatch");
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (!trimmed.empty()) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
        }
        reject_unknown(j, {"scenario", "budget", "alpha", "root_seed", "macro_replications",
                           "mode", "gate_bias", "threads", "methods", "alloc", "inventory",
                           "ml", "oracle", "out_dir"},
                       "");
        read_field(j, "scenario", cfg.scenario, "");
        read_field(j, "budget", cfg.budget, "");
        read_field(j, "alpha", cfg.alpha, "");
        read_field(j, "root_seed", cfg.root_seed, "");
        read_field(j, "macro_replications", cfg.macro_replications, "");
        read_field(j, "mode", cfg.mode, "");
        read_field(j, "gate_bias", cfg.gate_bias, "");
        read_field(j, "threads", cfg.threads, "");
        read_field(j, "methods", cfg.methods, "");
        read_field(j, "out_dir", cfg.out_dir, "");
        if (j.contains("alloc")) {
            const json& a = j.at("alloc");
            reject_unknown(a, {"b1", "r", "b2", "m"}, "alloc.");
            long v;
            if (a.contains("b1")) { read_field(a, "b1", v, "alloc."); cfg.alloc.b1 = v; }
            if (a.contains("r")) { read_field(a, "r", v, "alloc."); cfg.alloc.r = v; }
            if (a.contains("b2")) { read_field(a, "b2", v, "alloc."); cfg.alloc.b2 = v; }
            if (a.contains("m")) { read_field(a, "m", v, "alloc."); cfg.alloc.m = v; }
        }
        if (j.contains("inventory")) {
            const json& i = j.at("inventory");
            reject_unknown(i, {"s", "S", "generator", "n", "periods", "warmup"}, "inventory.");
            read_field(i, "s", cfg.inventory.s, "inventory.");
            read_field(i, "S", cfg.inventory.S, "inventory.");
            read_field(i, "generator", cfg.inventory.generator, "inventory.");
            read_field(i, "n", cfg.inventory.n, "inventory.");
            read_field(i, "periods", cfg.inventory.periods, "inventory.");
            read_field(i, "warmup", cfg.inventory.warmup, "inventory.");
        }
        if (j.contains("ml")) {
            const json& m = j.at("ml");
            reject_unknown(m, {"kind", "noise", "n", "learner", "folds", "repeats"}, "ml.");
            read_field(m, "kind", cfg.ml.kind, "ml.");
            read_field(m, "noise", cfg.ml.noise, "ml.");
            read_field(m, "n", cfg.ml.n, "ml.");
            read_field(m, "learner", cfg.ml.learner, "ml.");
            read_field(m, "folds", cfg.ml.folds, "ml.");
            read_field(m, "repeats", cfg.ml.repeats, "ml.");
        }
        if (j.contains("oracle")) {
            const json& o = j.at("oracle");
            reject_unknown(o, {"k", "power", "n", "mu", "sigma"}, "oracle.");
            read_field(o, "k", cfg.oracle.k, "oracle.");
            read_field(o, "power", cfg.oracle.power, "oracle.");
            read_field(o, "n", cfg.oracle.n, "oracle.");
            read_field(o, "mu", cfg.oracle.mu, "oracle.");
            read_field(o, "sigma", cfg.oracle.sigma, "oracle.");
        }
    }

    if (const char* env = std::getenv("ROA_SEED")) {
        cfg.root_seed = std::strtoull(env, nullptr, 10);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    json j;
    j["scenario"] = c.scenario;
    j["budget"] = c.budget;
    j["alpha"] = c.alpha;
    j["root_seed"] = c.root_seed;
    j["macro_replications"] = c.macro_replications;
    j["mode"] = c.mode;
    j["gate_bias"] = c.gate_bias;
    j["threads"] = c.threads;
    j["methods"] = c.methods;
    j["out_dir"] = c.out_dir;
    json a = json::object();
    if (c.alloc.b1) a["b1"] = *c.alloc.b1;
    if (c.alloc.r) a["r"] = *c.alloc.r;
    if (c.alloc.b2) a["b2"] = *c.alloc.b2;
    if (c.alloc.m) a["m"] = *c.alloc.m;
    j["alloc"] = a;
    j["inventory"] = {{"s", c.inventory.s},         {"S", c.inventory.S},
                      {"generator", c.inventory.generator}, {"n", c.inventory.n},
                      {"periods", c.inventory.periods},     {"warmup", c.inventory.warmup}};
    j["ml"] = {{"kind", c.ml.kind},     {"noise", c.ml.noise},    {"n", c.ml.n},
               {"learner", c.ml.learner}, {"folds", c.ml.folds}, {"repeats", c.ml.repeats}};
    j["oracle"] = {{"k", c.oracle.k}, {"power", c.oracle.power}, {"n", c.oracle.n},
                   {"mu", c.oracle.mu}, {"sigma", c.oracle.sigma}};
    return j.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& c) {
    // threads and output location are execution details, not part of the
    // experiment identity
    ExperimentConfig canon = c;
    canon.threads = 0;
    canon.out_dir.clear();
    const std::string s = serialize_config(canon);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace roa
