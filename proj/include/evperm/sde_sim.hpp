#pragma once

// Intraday price simulator with two square-root volatility factors.
//
// Time is measured in days. On a mesh of `mesh_per_interval` steps per
// sampling interval (default 60, i.e. one second for one-minute sampling),
// the factors follow
//
//     dV_j = kappa_j (theta - V_j) dt + xi_j sqrt(V_j) (rho dL + sqrt(1 - rho^2) dB_j)
//
// discretized by full-truncation Euler, the log price follows dP = sigma dL
// with sigma^2 = 2 V_1 (model A) or V_1 + V_2 (model B), and c is added to both
// factors at the first mesh point at or after the event time. The returned
// series holds Delta^(-1/index) (P_{(i+1)Delta} - P_{i Delta}).

#include "evperm/randgen.hpp"
#include "evperm/stats_core.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evperm {

enum class VolModel { a, b };

std::string to_string(VolModel model);
VolModel parse_vol_model(const std::string& text);

struct FactorParams {
    double kappa;
    double theta;
    double xi;
};

inline constexpr FactorParams kSlowFactor{0.0116, 0.5, 0.1023};
inline constexpr FactorParams kFastFactor{0.6930, 0.5, 0.7909};

struct SimConfig {
    VolModel model = VolModel::a;
    LevyDriver driver = LevyDriver::brownian();
    double jump_c = 0.0;
    double rho = -0.7;
    int mesh_per_interval = 60;
    int intervals_per_day = 390;
    // Index i* of the sampling interval that starts at the event time.
    int event_index = 195;
    double v1_0 = 0.5;
    double v2_0 = 0.5;
    std::uint64_t seed = 0;
    // Whole days of factor dynamics simulated (and discarded) before the recorded day.
    int burn_in_days = 0;
    // Multiplies both vol-of-vol coefficients; 0 freezes the factors at their start values.
    double vol_of_vol_scale = 1.0;

    double delta_n() const noexcept { return 1.0 / intervals_per_day; }
    double mesh_dt() const noexcept { return delta_n() / mesh_per_interval; }

    // Throws ValidationError naming the offending field. max_k, when nonzero,
    // requires room for max_k observations on each side of the event.
    void validate(int max_k = 0) const;
};

struct SimulatedDay {
    std::vector<double> returns;
    std::size_t event_index = 0;
    // sigma^2 at the start of each sampling interval (after the jump at the event).
    std::vector<double> sigma2_path;
    std::vector<double> v1_path;
    std::vector<double> v2_path;
    // sigma^2 immediately before and after the jump is applied.
    double sigma2_before_event = 0.0;
    double sigma2_after_event = 0.0;
};

SimulatedDay simulate_day(const SimConfig& config);
SimulatedDay simulate_day(const SimConfig& config, SeededStream& stream);

// pre = series[i*-k1 .. i*-1], post = series[i*+1 .. i*+k2]; observation i* is dropped.
// Throws RangeError if the window does not fit.
SplitSample extract_window(std::span<const double> series, std::size_t event_index, std::size_t k1, std::size_t k2);
SplitSample extract_window(const SimulatedDay& day, std::size_t k1, std::size_t k2);

}  // namespace evperm
