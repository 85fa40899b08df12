#include "evperm/sde_sim.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <cmath>

namespace evperm {

std::string to_string(VolModel model) { return model == VolModel::a ? "A" : "B"; }

VolModel parse_vol_model(const std::string& text) {
    if (text == "A" || text == "a") return VolModel::a;
    if (text == "B" || text == "b") return VolModel::b;
    throw InvalidInput("unknown volatility model '" + text + "' (expected A or B)");
}

void SimConfig::validate(int max_k) const {
    try {
        driver.validate();
    } catch (const InvalidInput& e) {
        throw ValidationError(std::string("driver: ") + e.what());
    }
    if (!(jump_c >= 0.0) || !std::isfinite(jump_c)) throw ValidationError("jump_c must be finite and >= 0");
    if (!(rho >= -1.0 && rho <= 1.0)) throw ValidationError("rho must lie in [-1, 1]");
    if (mesh_per_interval < 1) throw ValidationError("mesh_per_interval must be >= 1");
    if (intervals_per_day < 3) throw ValidationError("intervals_per_day must be >= 3");
    if (event_index < 1 || event_index >= intervals_per_day - 1) {
        throw ValidationError("event_index must leave at least one interval on each side");
    }
    if (max_k > 0 && (event_index - max_k < 0 || event_index + max_k >= intervals_per_day)) {
        throw ValidationError("event_index leaves fewer than " + std::to_string(max_k) +
                              " observations on one side of the event");
    }
    if (!(v1_0 >= 0.0) || !(v2_0 >= 0.0)) throw ValidationError("initial factor values must be >= 0");
    if (burn_in_days < 0) throw ValidationError("burn_in_days must be >= 0");
    if (!(vol_of_vol_scale >= 0.0)) throw ValidationError("vol_of_vol_scale must be >= 0");
}

SimulatedDay simulate_day(const SimConfig& config) {
    SeededStream stream(config.seed);
    return simulate_day(config, stream);
}

SimulatedDay simulate_day(const SimConfig& config, SeededStream& stream) {
    config.validate();

    const double dt = config.mesh_dt();
    const double sqrt_dt = std::sqrt(dt);
    const double index = config.driver.index();
    const double increment_scale = std::pow(dt, 1.0 / index);
    const double return_scale = std::pow(config.delta_n(), -1.0 / index);
    const double rho = config.rho;
    const double rho_perp = std::sqrt(1.0 - rho * rho);
    const double xi1 = kSlowFactor.xi * config.vol_of_vol_scale;
    const double xi2 = kFastFactor.xi * config.vol_of_vol_scale;
    const bool model_a = config.model == VolModel::a;

    double v1 = config.v1_0;
    double v2 = config.v2_0;
    double price = 0.0;

    auto variance = [model_a](double a, double b) {
        return model_a ? 2.0 * std::max(a, 0.0) : std::max(a, 0.0) + std::max(b, 0.0);
    };

    auto step = [&] {
        const double v1p = std::max(v1, 0.0);
        const double v2p = std::max(v2, 0.0);
        const double sigma = std::sqrt(variance(v1p, v2p));
        const double dl = increment_scale * sample_driver_standardized(stream, config.driver);
        const double db1 = sqrt_dt * sample_normal(stream);
        const double db2 = sqrt_dt * sample_normal(stream);
        price += sigma * dl;
        v1 += kSlowFactor.kappa * (kSlowFactor.theta - v1p) * dt + xi1 * std::sqrt(v1p) * (rho * dl + rho_perp * db1);
        v2 += kFastFactor.kappa * (kFastFactor.theta - v2p) * dt + xi2 * std::sqrt(v2p) * (rho * dl + rho_perp * db2);
    };

    const auto steps_per_day = static_cast<long>(config.intervals_per_day) * config.mesh_per_interval;
    for (long s = 0; s < steps_per_day * config.burn_in_days; ++s) step();
    price = 0.0;

    const auto n = static_cast<std::size_t>(config.intervals_per_day);
    SimulatedDay day;
    day.event_index = static_cast<std::size_t>(config.event_index);
    day.returns.resize(n);
    day.sigma2_path.resize(n);
    day.v1_path.resize(n);
    day.v2_path.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        if (i == day.event_index) {
            day.sigma2_before_event = variance(v1, v2);
            v1 += config.jump_c;
            v2 += config.jump_c;
            day.sigma2_after_event = variance(v1, v2);
        }
        day.sigma2_path[i] = variance(v1, v2);
        day.v1_path[i] = std::max(v1, 0.0);
        day.v2_path[i] = std::max(v2, 0.0);

        const double start = price;
        for (int s = 0; s < config.mesh_per_interval; ++s) step();
        day.returns[i] = return_scale * (price - start);
    }
    return day;
}

SplitSample extract_window(std::span<const double> series, std::size_t event_index, std::size_t k1, std::size_t k2) {
    if (k1 == 0 || k2 == 0) throw RangeError("window sizes must be >= 1");
    if (event_index >= series.size()) {
        throw RangeError("event index " + std::to_string(event_index) + " outside a series of length " +
                         std::to_string(series.size()));
    }
    if (k1 > event_index) {
        throw RangeError("need " + std::to_string(k1) + " observations before the event, only " +
                         std::to_string(event_index) + " available");
    }
    const std::size_t after = series.size() - event_index - 1;
    if (k2 > after) {
        throw RangeError("need " + std::to_string(k2) + " observations after the event, only " +
                         std::to_string(after) + " available");
    }
    std::vector<double> pre(series.begin() + static_cast<std::ptrdiff_t>(event_index - k1),
                            series.begin() + static_cast<std::ptrdiff_t>(event_index));
    std::vector<double> post(series.begin() + static_cast<std::ptrdiff_t>(event_index + 1),
                             series.begin() + static_cast<std::ptrdiff_t>(event_index + 1 + k2));
    return SplitSample(std::move(pre), std::move(post));
}

SplitSample extract_window(const SimulatedDay& day, std::size_t k1, std::size_t k2) {
    return extract_window(day.returns, day.event_index, k1, k2);
}

}  // namespace evperm
