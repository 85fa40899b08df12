#pragma once

// Reproducible random streams and the samplers used by the simulators.
//
// SeededStream is a counter-based SplitMix64 stream: the i-th raw output
// (i = 1, 2, ...) is mix64(key + i * 0x9E3779B97F4A7C15), where mix64 is the
// SplitMix64 finalizer (a bijection on 64-bit words). The key of a stream
// seeded with s is s itself; the key of child(j) is
//
//     mix64(key ^ mix64(j + 0xD1B54A32D192ED03))
//
// so child derivation is a pure function of (key, j). Uniform doubles use
// the top 53 bits of a raw output.

#include <cstdint>
#include <string>

namespace evperm {

class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) noexcept : key_(seed) {}

    std::uint64_t next_u64() noexcept;
    // [0, 1)
    double uniform() noexcept;
    // (0, 1)
    double uniform_open() noexcept;
    // Unbiased integer in [0, bound); bound > 0.
    std::uint64_t bounded(std::uint64_t bound) noexcept;

    SeededStream child(std::uint64_t index) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    // Spare Box-Muller variate; part of the stream state.
    bool has_spare_normal = false;
    double spare_normal = 0.0;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

double sample_uniform(SeededStream& stream) noexcept;
// Box-Muller; the second variate of each pair is cached in the stream.
double sample_normal(SeededStream& stream) noexcept;
// Rate-1 exponential by inversion.
double sample_exponential(SeededStream& stream) noexcept;
// Inversion for mean < 10, Hormann's PTRS transformed rejection otherwise.
std::int64_t sample_poisson(SeededStream& stream, double mean);

// Symmetric stable law with characteristic function exp(-|t|^beta), beta in (0, 2],
// by the Chambers-Mallows-Stuck construction. beta = 2 is N(0, 2); beta = 1 is Cauchy.
double sample_sym_stable(SeededStream& stream, double beta);

// Shock process of the price equation.
struct LevyDriver {
    enum class Kind { brownian, truncated_stable };

    Kind kind = Kind::brownian;
    double beta = 2.0;
    double trunc_c = 0.0;

    static LevyDriver brownian() noexcept { return {}; }
    static LevyDriver truncated_stable(double beta, double trunc_c);

    // Throws InvalidInput if the fields are inconsistent.
    void validate() const;
    // Activity index used to normalize increments: 2 for Brownian.
    double index() const noexcept { return kind == Kind::brownian ? 2.0 : beta; }
    // "brownian" or "stable:1.5:10"; accepted back by parse_driver.
    std::string label() const;

    friend bool operator==(const LevyDriver&, const LevyDriver&) = default;
};

// Increment normalized to unit time step: N(0,1) for Brownian, a stable(beta)
// draw redrawn until |Z| <= trunc_c otherwise.
double sample_driver_standardized(SeededStream& stream, const LevyDriver& driver);

// dt^(1/index) * sample_driver_standardized(...).
double sample_driver_increment(SeededStream& stream, const LevyDriver& driver, double dt);

}  // namespace evperm
