#include "evperm/config.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace evperm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::set<std::string> kDayKeys = {"rho",    "mesh_per_interval", "intervals_per_day", "event_index", "v1_0",
                                        "v2_0",   "burn_in_days",      "vol_of_vol_scale"};
const std::set<std::string> kSimOnlyKeys = {"model", "driver", "beta", "trunc_c", "jump_c", "seed"};
const std::set<std::string> kGridOnlyKeys = {"models", "drivers", "k",    "c",      "trials",
                                             "permutations", "alpha", "seed", "threads"};

void reject_unknown(const KeyValueConfig& config, const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& [key, value] : config.values()) {
        if (!a.count(key) && !b.count(key)) throw ValidationError("unknown config key '" + key + "'");
    }
}

void apply_day_keys(const KeyValueConfig& c, SimConfig& cfg) {
    if (c.has("rho")) cfg.rho = parse_real("rho", c.get("rho"));
    if (c.has("mesh_per_interval")) {
        cfg.mesh_per_interval = static_cast<int>(parse_integer("mesh_per_interval", c.get("mesh_per_interval")));
    }
    if (c.has("intervals_per_day")) {
        cfg.intervals_per_day = static_cast<int>(parse_integer("intervals_per_day", c.get("intervals_per_day")));
    }
    if (c.has("event_index")) cfg.event_index = static_cast<int>(parse_integer("event_index", c.get("event_index")));
    if (c.has("v1_0")) cfg.v1_0 = parse_real("v1_0", c.get("v1_0"));
    if (c.has("v2_0")) cfg.v2_0 = parse_real("v2_0", c.get("v2_0"));
    if (c.has("burn_in_days")) cfg.burn_in_days = static_cast<int>(parse_integer("burn_in_days", c.get("burn_in_days")));
    if (c.has("vol_of_vol_scale")) cfg.vol_of_vol_scale = parse_real("vol_of_vol_scale", c.get("vol_of_vol_scale"));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (config.has(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        config.values_[key] = trim(t.substr(eq + 1));
    }
    return config;
}

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    return parse(in);
}

const std::string& KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError("missing config key '" + key + "'");
    return it->second;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected a number, got '" + text + "'");
    }
    return value;
}

long long parse_integer(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected an integer, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected a decimal 64-bit unsigned integer, got '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

LevyDriver parse_driver(const std::string& text) {
    const std::string t = trim(text);
    if (t == "brownian") return LevyDriver::brownian();
    if (t.rfind("stable:", 0) == 0) {
        const auto second = t.find(':', 7);
        if (second == std::string::npos) throw ValidationError("driver: expected stable:BETA:C, got '" + text + "'");
        const double beta = parse_real("driver beta", t.substr(7, second - 7));
        const double c = parse_real("driver truncation", t.substr(second + 1));
        try {
            return LevyDriver::truncated_stable(beta, c);
        } catch (const InvalidInput& e) {
            throw ValidationError(std::string("driver: ") + e.what());
        }
    }
    throw ValidationError("driver: expected 'brownian' or 'stable:BETA:C', got '" + text + "'");
}

SimConfig sim_config_from(const KeyValueConfig& c, SimConfig cfg) {
    reject_unknown(c, kDayKeys, kSimOnlyKeys);
    if (c.has("model")) {
        try {
            cfg.model = parse_vol_model(c.get("model"));
        } catch (const InvalidInput& e) {
            throw ValidationError(std::string("model: ") + e.what());
        }
    }
    if (c.has("driver")) {
        const std::string& d = c.get("driver");
        if (d == "brownian") {
            cfg.driver = LevyDriver::brownian();
        } else if (d == "stable") {
            cfg.driver = {LevyDriver::Kind::truncated_stable, 1.5, 10.0};
        } else {
            cfg.driver = parse_driver(d);
        }
    }
    if (c.has("beta")) cfg.driver.beta = parse_real("beta", c.get("beta"));
    if (c.has("trunc_c")) cfg.driver.trunc_c = parse_real("trunc_c", c.get("trunc_c"));
    if (c.has("jump_c")) cfg.jump_c = parse_real("jump_c", c.get("jump_c"));
    if (c.has("seed")) cfg.seed = parse_seed("seed", c.get("seed"));
    apply_day_keys(c, cfg);
    cfg.validate();
    return cfg;
}

ExperimentGrid grid_from(const KeyValueConfig& c, ExperimentGrid g) {
    reject_unknown(c, kDayKeys, kGridOnlyKeys);
    if (c.has("models")) {
        g.models.clear();
        for (const auto& m : split_list(c.get("models"))) {
            try {
                g.models.push_back(parse_vol_model(m));
            } catch (const InvalidInput& e) {
                throw ValidationError(std::string("models: ") + e.what());
            }
        }
    }
    if (c.has("drivers")) {
        g.drivers.clear();
        for (const auto& d : split_list(c.get("drivers"))) g.drivers.push_back(parse_driver(d));
    }
    if (c.has("k")) {
        g.k_values.clear();
        for (const auto& k : split_list(c.get("k"))) g.k_values.push_back(static_cast<int>(parse_integer("k", k)));
    }
    if (c.has("c")) {
        g.c_values.clear();
        for (const auto& v : split_list(c.get("c"))) g.c_values.push_back(parse_real("c", v));
    }
    if (c.has("trials")) {
        const long long t = parse_integer("trials", c.get("trials"));
        if (t < 1) throw ValidationError("trials: must be >= 1");
        g.trials = static_cast<std::size_t>(t);
    }
    if (c.has("permutations")) {
        const long long m = parse_integer("permutations", c.get("permutations"));
        if (m < 1) throw ValidationError("permutations: must be >= 1");
        g.permutations = static_cast<std::size_t>(m);
    }
    if (c.has("alpha")) g.alpha = parse_real("alpha", c.get("alpha"));
    if (c.has("seed")) g.base_seed = parse_seed("seed", c.get("seed"));
    if (c.has("threads")) {
        const long long t = parse_integer("threads", c.get("threads"));
        if (t < 0) throw ValidationError("threads: must be >= 0");
        g.threads = static_cast<unsigned>(t);
    }
    apply_day_keys(c, g.day_template);
    g.validate();
    return g;
}

}  // namespace evperm
