#pragma once

// `key = value` configuration files for simulations and experiment grids.
// Blank lines and lines starting with '#' are ignored; list values are
// comma-separated. Unknown keys are rejected.
//
// Simulation keys: model (A|B), driver (brownian|stable), beta, trunc_c,
//   jump_c, rho, mesh_per_interval, intervals_per_day, event_index, v1_0,
//   v2_0, seed, burn_in_days, vol_of_vol_scale
// Grid keys: models, drivers (brownian | stable:BETA:C, ...), k, c, trials,
//   permutations, alpha, seed, threads, plus the simulation keys rho through
//   vol_of_vol_scale (except seed), which apply to every simulated day.

#include "evperm/experiments.hpp"
#include "evperm/randgen.hpp"
#include "evperm/sde_sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace evperm {

class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig from_file(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// "brownian" or "stable:BETA:C".
LevyDriver parse_driver(const std::string& text);

// Strict numeric parsing; ValidationError mentions `key`.
double parse_real(const std::string& key, const std::string& text);
long long parse_integer(const std::string& key, const std::string& text);
std::uint64_t parse_seed(const std::string& key, const std::string& text);
std::vector<std::string> split_list(const std::string& text);

SimConfig sim_config_from(const KeyValueConfig& config, SimConfig base = {});
ExperimentGrid grid_from(const KeyValueConfig& config, ExperimentGrid base);

}  // namespace evperm
