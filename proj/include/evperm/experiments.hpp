#pragma once

// Monte Carlo size/power harness for the permutation test and the t-test on
// simulated trading days.
//
// Seeding: the trial stream for (model, driver, trial) is
//     SeededStream(base_seed).child(scenario_key(model, driver)).child(trial)
// Its child(0) drives the day simulation and child(1).child(k) the
// permutation test for window k. Jump sizes do not enter the seed, so power
// curves use common random numbers across c, and one simulated day serves
// every window size.

#include "evperm/randgen.hpp"
#include "evperm/sde_sim.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace evperm {

enum class TestKind { perm, ttest };

std::string to_string(TestKind kind);

struct CellRecord {
    VolModel model = VolModel::a;
    LevyDriver driver;
    int k = 0;
    double c = 0.0;
    TestKind test = TestKind::perm;
    std::size_t rejections = 0;
    std::size_t trials = 0;

    double rate() const noexcept { return trials == 0 ? 0.0 : static_cast<double>(rejections) / trials; }
    // sqrt(r (1 - r) / trials)
    double standard_error() const noexcept;

    friend bool operator==(const CellRecord&, const CellRecord&) = default;
};

struct RejectionTable {
    std::vector<CellRecord> records;

    // nullptr when absent.
    const CellRecord* find(VolModel model, const LevyDriver& driver, int k, double c, TestKind test) const;
};

struct ExperimentGrid {
    std::vector<VolModel> models{VolModel::a};
    std::vector<LevyDriver> drivers{LevyDriver::brownian()};
    std::vector<int> k_values{15, 30, 60, 90};
    std::vector<double> c_values{0.0};
    std::size_t trials = 2000;
    std::size_t permutations = 1000;
    double alpha = 0.05;
    std::uint64_t base_seed = 20200221;
    // 0 = hardware concurrency.
    unsigned threads = 0;
    // Overrides applied to every simulated day (geometry, rho, burn-in, ...).
    SimConfig day_template;

    // Throws ValidationError on empty lists or out-of-range values.
    void validate() const;

    static ExperimentGrid size_grid();
    static ExperimentGrid power_grid();
};

// Called after each finished (model, driver, c) block with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

struct CellPair {
    CellRecord perm;
    CellRecord ttest;
};

std::uint64_t scenario_key(VolModel model, const LevyDriver& driver);

CellPair run_cell(VolModel model, const LevyDriver& driver, int k, double c, std::size_t trials, std::size_t m,
                  double alpha, std::uint64_t seed, unsigned threads = 0);

RejectionTable run_grid(const ExperimentGrid& grid, const ProgressFn& progress = {});

// Runs fn(trial, stream) for trial in [0, trials) on up to `threads` workers,
// each with SeededStream(seed).child(trial), and returns how many returned true.
// The count does not depend on the number of workers.
std::size_t parallel_count(std::size_t trials, std::uint64_t seed, unsigned threads,
                           const std::function<bool(std::size_t, SeededStream&)>& fn);

// CSV schema:
//   model,driver,beta,trunc_c,k,c,test,rejections,trials,rejection_rate,standard_error
void write_table(const RejectionTable& table, const std::filesystem::path& path);
void write_table(const RejectionTable& table, std::ostream& out);
RejectionTable read_table(const std::filesystem::path& path);
RejectionTable read_table(std::istream& in);

// Aligned text in the layout of a size table: one block per model and jump
// size, rows k, permutation-test columns per driver, then t-test columns.
std::string render_table_text(const RejectionTable& table);

// CSV schema: model,driver,c,k,test,rate
void write_power_csv(const RejectionTable& table, const std::filesystem::path& path);
void write_power_csv(const RejectionTable& table, std::ostream& out);

}  // namespace evperm
