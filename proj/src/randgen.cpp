#include "evperm/randgen.hpp"

#include "evperm/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace evperm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kChildSalt = 0xD1B54A32D192ED03ULL;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

__extension__ using uint128 = unsigned __int128;

// Inversion from zero; used for small means where exp(-mean) does not underflow.
std::int64_t poisson_inversion(SeededStream& stream, double mean) {
    double u = stream.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
        if (p <= 0.0 && cdf < u) break;  // round-off guard deep in the tail
    }
    return k;
}

// W. Hormann (1993), "The transformed rejection method for generating Poisson random variables".
std::int64_t poisson_ptrs(SeededStream& stream, double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = stream.uniform() - 0.5;
        const double v = stream.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::int64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::int64_t>(k);
        }
    }
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SeededStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double SeededStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededStream::uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t SeededStream::bounded(std::uint64_t bound) noexcept {
    // Lemire's multiply-and-reject.
    uint128 product = static_cast<uint128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<uint128>(next_u64()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

SeededStream SeededStream::child(std::uint64_t index) const noexcept {
    return SeededStream(mix64(key_ ^ mix64(index + kChildSalt)));
}

double sample_uniform(SeededStream& stream) noexcept { return stream.uniform(); }

double sample_normal(SeededStream& stream) noexcept {
    if (stream.has_spare_normal) {
        stream.has_spare_normal = false;
        return stream.spare_normal;
    }
    const double radius = std::sqrt(-2.0 * std::log(stream.uniform_open()));
    const double angle = kTwoPi * stream.uniform();
    stream.spare_normal = radius * std::sin(angle);
    stream.has_spare_normal = true;
    return radius * std::cos(angle);
}

double sample_exponential(SeededStream& stream) noexcept { return -std::log(stream.uniform_open()); }

std::int64_t sample_poisson(SeededStream& stream, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw InvalidInput("poisson mean must be finite and non-negative");
    }
    if (mean == 0.0) return 0;
    return mean < 10.0 ? poisson_inversion(stream, mean) : poisson_ptrs(stream, mean);
}

double sample_sym_stable(SeededStream& stream, double beta) {
    if (!(beta > 0.0 && beta <= 2.0)) {
        throw InvalidInput("stable index must lie in (0, 2]");
    }
    const double angle = std::numbers::pi * (stream.uniform_open() - 0.5);
    const double w = sample_exponential(stream);
    if (beta == 1.0) {
        return std::tan(angle);
    }
    const double ba = beta * angle;
    return std::sin(ba) / std::pow(std::cos(angle), 1.0 / beta) *
           std::pow(std::cos(angle - ba) / w, (1.0 - beta) / beta);
}

LevyDriver LevyDriver::truncated_stable(double beta, double trunc_c) {
    LevyDriver d{Kind::truncated_stable, beta, trunc_c};
    d.validate();
    return d;
}

void LevyDriver::validate() const {
    if (kind == Kind::brownian) {
        if (beta != 2.0) throw InvalidInput("brownian driver has index 2");
        return;
    }
    if (!(beta > 1.0 && beta < 2.0)) throw InvalidInput("truncated stable driver requires beta in (1, 2)");
    if (!(trunc_c > 0.0) || !std::isfinite(trunc_c)) throw InvalidInput("truncation bound must be positive");
}

std::string LevyDriver::label() const {
    if (kind == Kind::brownian) return "brownian";
    std::ostringstream out;
    out << "stable:" << beta << ":" << trunc_c;
    return out.str();
}

double sample_driver_standardized(SeededStream& stream, const LevyDriver& driver) {
    if (driver.kind == LevyDriver::Kind::brownian) {
        return sample_normal(stream);
    }
    for (;;) {
        const double z = sample_sym_stable(stream, driver.beta);
        if (std::fabs(z) <= driver.trunc_c) return z;
    }
}

double sample_driver_increment(SeededStream& stream, const LevyDriver& driver, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
    return std::pow(dt, 1.0 / driver.index()) * sample_driver_standardized(stream, driver);
}

}  // namespace evperm
