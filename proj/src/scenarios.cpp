#include "evperm/scenarios.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <cmath>

namespace evperm {

namespace {

void check_geometry(int length, int event_index) {
    if (length < 3) throw ValidationError("length must be >= 3");
    if (event_index < 1 || event_index >= length - 1) {
        throw ValidationError("event_index must leave at least one observation on each side");
    }
}

// Brownian path sampled on the grid i / length, starting at zero.
class BrownianGrid {
public:
    BrownianGrid(SeededStream& stream, int length) : stream_(stream), step_sd_(std::sqrt(1.0 / length)) {}
    double value() const noexcept { return value_; }
    void advance() { value_ += step_sd_ * sample_normal(stream_); }

private:
    SeededStream& stream_;
    double step_sd_;
    double value_ = 0.0;
};

}  // namespace

std::vector<double> simulate_location_scale(const LocationScaleConfig& config) {
    SeededStream stream(config.seed);
    return simulate_location_scale(config, stream);
}

std::vector<double> simulate_location_scale(const LocationScaleConfig& config, SeededStream& stream) {
    check_geometry(config.length, config.event_index);
    if (!(config.v0 > 0.0)) throw ValidationError("v0 must be positive");
    BrownianGrid w_mu(stream, config.length);
    BrownianGrid w_v(stream, config.length);
    std::vector<double> out(static_cast<std::size_t>(config.length));
    for (int i = 0; i < config.length; ++i) {
        const bool after = i >= config.event_index;
        const double mu = config.mu0 + config.mu_vol * w_mu.value() + (after ? config.jump_mu : 0.0);
        const double v = config.v0 * std::exp(config.v_vol * w_v.value()) + (after ? config.jump_v : 0.0);
        out[static_cast<std::size_t>(i)] = mu + std::max(v, 0.0) * sample_normal(stream);
        w_mu.advance();
        w_v.advance();
    }
    return out;
}

std::vector<std::int64_t> simulate_poisson_volume(const PoissonVolumeConfig& config) {
    SeededStream stream(config.seed);
    return simulate_poisson_volume(config, stream);
}

std::vector<std::int64_t> simulate_poisson_volume(const PoissonVolumeConfig& config, SeededStream& stream) {
    check_geometry(config.length, config.event_index);
    if (!(config.intensity0 >= 0.0)) throw ValidationError("intensity0 must be >= 0");
    BrownianGrid w(stream, config.length);
    std::vector<std::int64_t> out(static_cast<std::size_t>(config.length));
    for (int i = 0; i < config.length; ++i) {
        double zeta = config.intensity0 * std::exp(config.vol * w.value());
        if (i >= config.event_index) zeta += config.jump;
        out[static_cast<std::size_t>(i)] = sample_poisson(stream, std::max(zeta, 0.0));
        w.advance();
    }
    return out;
}

std::vector<int> simulate_spread(const SpreadConfig& config) {
    SeededStream stream(config.seed);
    return simulate_spread(config, stream);
}

std::vector<int> simulate_spread(const SpreadConfig& config, SeededStream& stream) {
    check_geometry(config.length, config.event_index);
    BrownianGrid w(stream, config.length);
    std::vector<int> out(static_cast<std::size_t>(config.length));
    for (int i = 0; i < config.length; ++i) {
        double zeta = config.propensity0 + config.vol * w.value();
        if (i >= config.event_index) zeta += config.jump;
        zeta = std::clamp(zeta, 0.0, 1.0);
        out[static_cast<std::size_t>(i)] = 1 + (zeta >= stream.uniform_open() ? 1 : 0);
        w.advance();
    }
    return out;
}

}  // namespace evperm
