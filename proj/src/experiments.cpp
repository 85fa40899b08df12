#include "evperm/experiments.hpp"

#include "evperm/error.hpp"
#include "evperm/permtest.hpp"
#include "evperm/ttest.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace evperm {

namespace {

std::string shortest(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, const char* column) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(std::string("bad value '") + text + "' in column " + column, line);
    }
    return value;
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

std::string to_string(TestKind kind) { return kind == TestKind::perm ? "perm" : "ttest"; }

double CellRecord::standard_error() const noexcept {
    if (trials == 0) return 0.0;
    const double r = rate();
    return std::sqrt(r * (1.0 - r) / static_cast<double>(trials));
}

const CellRecord* RejectionTable::find(VolModel model, const LevyDriver& driver, int k, double c,
                                       TestKind test) const {
    for (const auto& r : records) {
        if (r.model == model && r.driver == driver && r.k == k && r.c == c && r.test == test) return &r;
    }
    return nullptr;
}

void ExperimentGrid::validate() const {
    if (models.empty()) throw ValidationError("models: list is empty");
    if (drivers.empty()) throw ValidationError("drivers: list is empty");
    if (k_values.empty()) throw ValidationError("k: list is empty");
    if (c_values.empty()) throw ValidationError("c: list is empty");
    if (trials < 1) throw ValidationError("trials: must be >= 1");
    if (permutations < 1) throw ValidationError("permutations: must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha: must lie in (0, 1)");
    for (const auto& d : drivers) {
        try {
            d.validate();
        } catch (const InvalidInput& e) {
            throw ValidationError(std::string("drivers: ") + e.what());
        }
    }
    for (double c : c_values) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("c: jump sizes must be finite and >= 0");
    }
    const int max_k = *std::max_element(k_values.begin(), k_values.end());
    if (*std::min_element(k_values.begin(), k_values.end()) < 1) throw ValidationError("k: values must be >= 1");
    day_template.validate(max_k);
}

ExperimentGrid ExperimentGrid::size_grid() {
    ExperimentGrid g;
    g.models = {VolModel::a, VolModel::b};
    g.drivers = {LevyDriver::brownian(), LevyDriver::truncated_stable(1.5, 10), LevyDriver::truncated_stable(1.5, 20),
                 LevyDriver::truncated_stable(1.5, 30)};
    return g;
}

ExperimentGrid ExperimentGrid::power_grid() {
    ExperimentGrid g;
    g.models = {VolModel::a, VolModel::b};
    g.c_values.clear();
    for (int i = 0; i <= 10; ++i) g.c_values.push_back(0.5 * i);
    return g;
}

std::uint64_t scenario_key(VolModel model, const LevyDriver& driver) {
    std::uint64_t key = model == VolModel::a ? 1 : 2;
    if (driver.kind == LevyDriver::Kind::truncated_stable) {
        key = mix64(key ^ 0x5354ULL);
        key = mix64(key ^ static_cast<std::uint64_t>(std::llround(driver.beta * 1e6)));
        key = mix64(key ^ static_cast<std::uint64_t>(std::llround(driver.trunc_c * 1e6)));
    }
    return key;
}

std::size_t parallel_count(std::size_t trials, std::uint64_t seed, unsigned threads,
                           const std::function<bool(std::size_t, SeededStream&)>& fn) {
    std::vector<std::uint8_t> hits(trials, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const SeededStream root(seed);

    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= trials) return;
            try {
                SeededStream stream = root.child(t);
                hits[t] = fn(t, stream) ? 1 : 0;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = trials;
            }
        }
    };

    const unsigned n = worker_count(threads, trials);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return static_cast<std::size_t>(std::count(hits.begin(), hits.end(), std::uint8_t{1}));
}

RejectionTable run_grid(const ExperimentGrid& grid, const ProgressFn& progress) {
    grid.validate();

    const std::size_t nk = grid.k_values.size();
    const std::size_t blocks = grid.models.size() * grid.drivers.size() * grid.c_values.size();
    const PermutationScheme scheme = PermutationScheme::random_subset(grid.permutations);
    RejectionTable table;
    std::size_t done = 0;

    for (VolModel model : grid.models) {
        for (const LevyDriver& driver : grid.drivers) {
            const std::uint64_t key = scenario_key(model, driver);
            for (double c : grid.c_values) {
                SimConfig cfg = grid.day_template;
                cfg.model = model;
                cfg.driver = driver;
                cfg.jump_c = c;

                // Per trial: bit 2j = perm rejection for k_values[j], bit 2j+1 = t-test rejection.
                std::vector<std::vector<std::uint8_t>> outcomes(grid.trials, std::vector<std::uint8_t>(2 * nk, 0));
                std::atomic<std::size_t> next{0};
                std::exception_ptr failure;
                std::mutex failure_mutex;
                const SeededStream root = SeededStream(grid.base_seed).child(key);

                auto worker = [&] {
                    for (;;) {
                        const std::size_t t = next.fetch_add(1);
                        if (t >= grid.trials) return;
                        try {
                            const SeededStream trial = root.child(t);
                            SeededStream sim_stream = trial.child(0);
                            const SeededStream perm_root = trial.child(1);
                            const SimulatedDay day = simulate_day(cfg, sim_stream);
                            for (std::size_t j = 0; j < nk; ++j) {
                                const auto k = static_cast<std::size_t>(grid.k_values[j]);
                                const SplitSample window = extract_window(day, k, k);
                                SeededStream perm_stream = perm_root.child(k);
                                outcomes[t][2 * j] = run_test(window, grid.alpha, scheme, perm_stream).rejected;
                                outcomes[t][2 * j + 1] = t_test(window, grid.alpha).rejected;
                            }
                        } catch (const std::exception& e) {
                            std::lock_guard lock(failure_mutex);
                            if (!failure) {
                                failure = std::make_exception_ptr(
                                    Error("model " + to_string(model) + ", driver " + driver.label() + ", c=" +
                                          shortest(c) + ", trial " + std::to_string(t) + ": " + e.what()));
                            }
                            next = grid.trials;
                        }
                    }
                };

                const unsigned n = worker_count(grid.threads, grid.trials);
                std::vector<std::thread> pool;
                for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
                worker();
                for (auto& th : pool) th.join();
                if (failure) std::rethrow_exception(failure);

                for (std::size_t j = 0; j < nk; ++j) {
                    for (TestKind test : {TestKind::perm, TestKind::ttest}) {
                        CellRecord rec;
                        rec.model = model;
                        rec.driver = driver;
                        rec.k = grid.k_values[j];
                        rec.c = c;
                        rec.test = test;
                        rec.trials = grid.trials;
                        const std::size_t bit = 2 * j + (test == TestKind::perm ? 0 : 1);
                        for (const auto& o : outcomes) rec.rejections += o[bit];
                        table.records.push_back(rec);
                    }
                }
                if (progress) progress(++done, blocks);
            }
        }
    }
    return table;
}

CellPair run_cell(VolModel model, const LevyDriver& driver, int k, double c, std::size_t trials, std::size_t m,
                  double alpha, std::uint64_t seed, unsigned threads) {
    ExperimentGrid grid;
    grid.models = {model};
    grid.drivers = {driver};
    grid.k_values = {k};
    grid.c_values = {c};
    grid.trials = trials;
    grid.permutations = m;
    grid.alpha = alpha;
    grid.base_seed = seed;
    grid.threads = threads;
    const RejectionTable table = run_grid(grid);
    return {table.records.at(0), table.records.at(1)};
}

void write_table(const RejectionTable& table, std::ostream& out) {
    out << "model,driver,beta,trunc_c,k,c,test,rejections,trials,rejection_rate,standard_error\n";
    for (const auto& r : table.records) {
        const bool stable = r.driver.kind == LevyDriver::Kind::truncated_stable;
        out << to_string(r.model) << ',' << (stable ? "stable" : "brownian") << ',' << shortest(r.driver.beta) << ','
            << shortest(r.driver.trunc_c) << ',' << r.k << ',' << shortest(r.c) << ',' << to_string(r.test) << ','
            << r.rejections << ',' << r.trials << ',' << fixed(r.rate(), 3) << ',' << fixed(r.standard_error(), 4)
            << '\n';
    }
}

void write_table(const RejectionTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_table(table, out);
}

RejectionTable read_table(std::istream& in) {
    RejectionTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty rejection table");
    ++line_no;
    if (line != "model,driver,beta,trunc_c,k,c,test,rejections,trials,rejection_rate,standard_error") {
        throw ParseError("unexpected header", line_no);
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11) throw ParseError("expected 11 fields", line_no);
        CellRecord r;
        try {
            r.model = parse_vol_model(f[0]);
        } catch (const InvalidInput& e) {
            throw ParseError(e.what(), line_no);
        }
        const double beta = parse_number<double>(f[2], line_no, "beta");
        const double trunc_c = parse_number<double>(f[3], line_no, "trunc_c");
        if (f[1] == "brownian") {
            r.driver = LevyDriver::brownian();
        } else if (f[1] == "stable") {
            r.driver = {LevyDriver::Kind::truncated_stable, beta, trunc_c};
        } else {
            throw ParseError("unknown driver '" + f[1] + "'", line_no);
        }
        r.k = parse_number<int>(f[4], line_no, "k");
        r.c = parse_number<double>(f[5], line_no, "c");
        if (f[6] == "perm") {
            r.test = TestKind::perm;
        } else if (f[6] == "ttest") {
            r.test = TestKind::ttest;
        } else {
            throw ParseError("unknown test '" + f[6] + "'", line_no);
        }
        r.rejections = parse_number<std::size_t>(f[7], line_no, "rejections");
        r.trials = parse_number<std::size_t>(f[8], line_no, "trials");
        if (r.rejections > r.trials) throw ParseError("rejections exceed trials", line_no);
        table.records.push_back(r);
    }
    return table;
}

RejectionTable read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_table(in);
}

std::string render_table_text(const RejectionTable& table) {
    // Preserve first-appearance order of every axis.
    std::vector<VolModel> models;
    std::vector<LevyDriver> drivers;
    std::vector<int> ks;
    std::vector<double> cs;
    auto add = [](auto& list, const auto& v) {
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
    };
    for (const auto& r : table.records) {
        add(models, r.model);
        add(drivers, r.driver);
        add(ks, r.k);
        add(cs, r.c);
    }

    std::ostringstream out;
    const std::string perm_title = "Permutation test";
    const std::size_t nd = std::max<std::size_t>(drivers.size(), 1);
    const std::size_t width = std::max<std::size_t>(8, (perm_title.size() + 1 + nd - 1) / nd);
    auto pad = [](const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; };

    out << "Driver columns:";
    for (std::size_t d = 0; d < drivers.size(); ++d) out << "  (" << d + 1 << ") " << drivers[d].label();
    out << "\n\n";

    out << pad("", 10) << "  " << pad(perm_title, width * nd) << "    "
        << pad("T-test", width * nd) << '\n';
    out << pad("", 10) << "  ";
    for (std::size_t d = 0; d < drivers.size(); ++d) out << pad("(" + std::to_string(d + 1) + ")", width);
    out << "    ";
    for (std::size_t d = 0; d < drivers.size(); ++d) out << pad("(" + std::to_string(d + 1) + ")", width);
    out << '\n';

    for (VolModel model : models) {
        for (double c : cs) {
            out << "Model " << to_string(model);
            if (cs.size() > 1 || c != 0.0) out << ", c = " << shortest(c);
            out << '\n';
            for (int k : ks) {
                out << pad("k_n = " + std::to_string(k), 10) << "  ";
                for (TestKind test : {TestKind::perm, TestKind::ttest}) {
                    for (const auto& d : drivers) {
                        const CellRecord* r = table.find(model, d, k, c, test);
                        out << pad(r ? fixed(r->rate(), 3) : "-", width);
                    }
                    if (test == TestKind::perm) out << "    ";
                }
                out << '\n';
            }
            out << '\n';
        }
    }
    return out.str();
}

void write_power_csv(const RejectionTable& table, std::ostream& out) {
    out << "model,driver,c,k,test,rate\n";
    for (const auto& r : table.records) {
        out << to_string(r.model) << ',' << r.driver.label() << ',' << shortest(r.c) << ',' << r.k << ','
            << to_string(r.test) << ',' << fixed(r.rate(), 3) << '\n';
    }
}

void write_power_csv(const RejectionTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_power_csv(table, out);
}

}  // namespace evperm
