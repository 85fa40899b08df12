#pragma once

// State-space scenario generators for non-return data: continuous volume
// (location-scale), count volume (Poisson) and a two-level bid-ask spread.
// Each series has `length` observations on a unit-day grid, the state is
// sampled at i/length, and an optional jump is added to the state from
// observation `event_index` onwards.

#include "evperm/randgen.hpp"

#include <cstdint>
#include <vector>

namespace evperm {

// Y_i = mu_i + v_i * eps_i with mu_t = mu0 + mu_vol W1_t, v_t = v0 exp(v_vol W2_t).
struct LocationScaleConfig {
    int length = 390;
    int event_index = 195;
    double mu0 = 0.0;
    double v0 = 1.0;
    double mu_vol = 0.0;
    double v_vol = 0.0;
    double jump_mu = 0.0;
    double jump_v = 0.0;
    std::uint64_t seed = 0;
};

// Y_i ~ Poisson(zeta_i) with zeta_t = zeta0 exp(vol W_t) + jump 1{t >= tau}.
struct PoissonVolumeConfig {
    int length = 390;
    int event_index = 195;
    double intensity0 = 4.0;
    double vol = 0.0;
    double jump = 0.0;
    std::uint64_t seed = 0;
};

// Y_i = 1 + 1{zeta_i >= eps_i}, eps_i ~ U(0,1), zeta_t = clamp(zeta0 + vol W_t + jump 1{t >= tau}, 0, 1).
struct SpreadConfig {
    int length = 390;
    int event_index = 195;
    double propensity0 = 0.5;
    double vol = 0.0;
    double jump = 0.0;
    std::uint64_t seed = 0;
};

std::vector<double> simulate_location_scale(const LocationScaleConfig& config);
std::vector<double> simulate_location_scale(const LocationScaleConfig& config, SeededStream& stream);

std::vector<std::int64_t> simulate_poisson_volume(const PoissonVolumeConfig& config);
std::vector<std::int64_t> simulate_poisson_volume(const PoissonVolumeConfig& config, SeededStream& stream);

std::vector<int> simulate_spread(const SpreadConfig& config);
std::vector<int> simulate_spread(const SpreadConfig& config, SeededStream& stream);

template <typename T>
std::vector<double> as_real(const std::vector<T>& series) {
    return std::vector<double>(series.begin(), series.end());
}

}  // namespace evperm
