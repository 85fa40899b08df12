#include "evperm/cli.hpp"

#include "evperm/config.hpp"
#include "evperm/error.hpp"
#include "evperm/experiments.hpp"
#include "evperm/ingest.hpp"
#include "evperm/permtest.hpp"
#include "evperm/sde_sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace evperm::cli {

namespace {

// Bad flags or config values.
class UsageError : public Error {
public:
    using Error::Error;
};

// Unusable input data (price file, event outside the sample).
class DataError : public Error {
public:
    using Error::Error;
};

template <typename Fn>
auto as_usage(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

template <typename Fn>
auto as_data(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw DataError(e.what());
    }
}

std::string num(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

struct CommonFlags {
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::size_t permutations = 999;
    std::optional<std::size_t> k;
    std::optional<std::size_t> k1;
    std::optional<std::size_t> k2;
    std::string out;
};

struct TestFlags {
    std::string input;
    std::string event_date;
    bool nonrandomized = false;
    bool include_event = false;
    bool full = false;
    bool machine = false;
};

struct SimulateFlags {
    std::string config;
    std::optional<std::string> model;
    std::optional<std::string> driver;
    std::optional<double> beta;
    std::optional<double> trunc_c;
    std::optional<double> jump_c;
    bool seed_given = false;
};

struct GridFlags {
    std::string config;
    std::optional<std::size_t> trials;
    std::vector<std::string> models;
    std::vector<std::string> drivers;
    std::vector<int> ks;
    std::vector<std::string> cs;
    bool cs_given = false;
    std::optional<unsigned> threads;
    bool quiet = false;
};

struct EmpiricalFlags {
    std::string input;
    std::vector<std::string> events;
    bool randomized = false;
    bool include_event = false;
};

void print_outcome(std::ostream& out, const TestOutcome& r, const EventWindow& w, bool machine) {
    const bool decision = r.rejected;
    if (machine) {
        out << "event=" << format_date(w.resolved_date) << " k1=" << w.sample.k1() << " k2=" << w.sample.k2()
            << " statistic=" << num(r.statistic, 10) << " critical_value=" << num(r.critical_value, 10)
            << " m_total=" << r.m_total << " m_plus=" << r.m_plus << " m_zero=" << r.m_zero
            << " phat=" << num(r.phat) << " phi=" << num(r.phi) << " p_value=" << num(r.p_value)
            << " randomized=" << (r.randomized ? 1 : 0) << " decision=" << (decision ? "REJECT" : "FAIL_TO_REJECT")
            << '\n';
        return;
    }
    out << "event date        " << format_date(w.resolved_date) << '\n'
        << "window            k1=" << w.sample.k1() << " k2=" << w.sample.k2() << '\n'
        << "statistic T       " << num(r.statistic, 10) << '\n'
        << "critical T*       " << num(r.critical_value, 10) << '\n'
        << "M / M+ / M0       " << r.m_total << " / " << r.m_plus << " / " << r.m_zero << '\n'
        << "phat              " << num(r.phat) << '\n'
        << "phi               " << num(r.phi) << '\n'
        << "p-value           " << num(r.p_value) << '\n'
        << "test              " << (r.randomized ? "randomized" : "non-randomized") << '\n'
        << "decision          " << (decision ? "REJECT" : "FAIL TO REJECT") << '\n';
}

int cmd_test(const CommonFlags& common, const TestFlags& flags, std::ostream& out) {
    const Date date = as_usage([&] { return parse_date(flags.event_date); });
    std::size_t k1 = common.k.value_or(5);
    std::size_t k2 = k1;
    if (common.k1 || common.k2) {
        if (!common.k1 || !common.k2) throw UsageError("--k1 and --k2 must be given together");
        k1 = *common.k1;
        k2 = *common.k2;
    }
    const PermutationScheme scheme =
        flags.full ? PermutationScheme::full() : PermutationScheme::random_subset(common.permutations);

    const PriceSeries series = as_data([&] { return load_prices(flags.input); });
    const EventWindow window = as_data([&] { return event_window(series, date, k1, k2, flags.include_event); });
    as_usage([&] { return scheme.total(window.sample.size()); });

    SeededStream stream(common.seed);
    const TestOutcome r = as_usage([&] {
        return run_test(window.sample, common.alpha, scheme, stream, !flags.nonrandomized);
    });
    print_outcome(out, r, window, flags.machine);
    return ok;
}

int cmd_simulate(const CommonFlags& common, const SimulateFlags& flags, std::ostream& out) {
    const SimConfig cfg = as_usage([&] {
        KeyValueConfig kv = flags.config.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(flags.config);
        if (flags.model) kv.set("model", *flags.model);
        if (flags.driver) kv.set("driver", *flags.driver);
        if (flags.beta) kv.set("beta", std::to_string(*flags.beta));
        if (flags.trunc_c) kv.set("trunc_c", std::to_string(*flags.trunc_c));
        if (flags.jump_c) kv.set("jump_c", std::to_string(*flags.jump_c));
        if (flags.seed_given || !kv.has("seed")) kv.set("seed", std::to_string(common.seed));
        return sim_config_from(kv);
    });
    const SimulatedDay day = simulate_day(cfg);

    std::ofstream file;
    if (!common.out.empty()) {
        file.open(common.out);
        if (!file) throw DataError("cannot open " + common.out + " for writing");
    }
    std::ostream& csv = common.out.empty() ? out : file;
    csv << "minute_index,return,sigma2\n";
    char buf[128];
    for (std::size_t i = 0; i < day.returns.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, day.returns[i], day.sigma2_path[i]);
        csv << buf;
    }
    if (!common.out.empty()) {
        out << "wrote " << day.returns.size() << " returns (event index " << day.event_index << ", model "
            << to_string(cfg.model) << ", driver " << cfg.driver.label() << ") to " << common.out << '\n';
    }
    return ok;
}

ExperimentGrid build_grid(const CommonFlags& common, const GridFlags& flags, ExperimentGrid base,
                          bool permutations_given, bool alpha_given, bool seed_given) {
    return as_usage([&] {
        KeyValueConfig kv = flags.config.empty() ? KeyValueConfig{} : KeyValueConfig::from_file(flags.config);
        auto join = [](const auto& items) {
            std::string s;
            for (const auto& item : items) {
                if (!s.empty()) s += ',';
                if constexpr (std::is_same_v<std::decay_t<decltype(item)>, std::string>) {
                    s += item;
                } else {
                    s += std::to_string(item);
                }
            }
            return s;
        };
        if (flags.trials) kv.set("trials", std::to_string(*flags.trials));
        if (!flags.models.empty()) kv.set("models", join(flags.models));
        if (!flags.drivers.empty()) kv.set("drivers", join(flags.drivers));
        if (!flags.ks.empty()) kv.set("k", join(flags.ks));
        if (flags.cs_given) kv.set("c", join(flags.cs));
        if (flags.threads) kv.set("threads", std::to_string(*flags.threads));
        if (permutations_given) kv.set("permutations", std::to_string(common.permutations));
        if (alpha_given) kv.set("alpha", num(common.alpha, 17));
        if (seed_given) kv.set("seed", std::to_string(common.seed));
        return grid_from(kv, std::move(base));
    });
}

int cmd_grid(const std::string& name, const ExperimentGrid& grid, const CommonFlags& common, bool quiet,
             std::ostream& out, std::ostream& err) {
    ProgressFn progress;
    if (!quiet) {
        progress = [&err, &name](std::size_t done, std::size_t total) {
            err << "[" << name << "] " << done << "/" << total << " scenario blocks done\n";
        };
    }
    const RejectionTable table = run_grid(grid, progress);
    const std::string prefix = common.out.empty() ? name : common.out;
    if (name == "size") {
        write_table(table, prefix + ".csv");
        const std::string text = render_table_text(table);
        std::ofstream txt(prefix + ".txt");
        if (!txt) throw DataError("cannot open " + prefix + ".txt for writing");
        txt << text;
        out << text << "wrote " << prefix << ".csv and " << prefix << ".txt\n";
    } else {
        write_power_csv(table, prefix + ".csv");
        write_table(table, prefix + "_table.csv");
        out << render_table_text(table) << "wrote " << prefix << ".csv and " << prefix << "_table.csv\n";
    }
    return ok;
}

int cmd_empirical(const CommonFlags& common, const EmpiricalFlags& flags, std::size_t permutations, std::ostream& out) {
    const std::size_t k = common.k.value_or(5);
    std::vector<Date> dates;
    for (const auto& e : flags.events.empty() ? default_event_dates() : flags.events) {
        dates.push_back(as_usage([&] { return parse_date(e); }));
    }
    const PriceSeries series = as_data([&] { return load_prices(flags.input); });
    const PermutationScheme scheme = PermutationScheme::random_subset(permutations);

    out << "event_date  resolved    statistic     critical      p_value   decision\n";
    const SeededStream root(common.seed);
    for (std::size_t i = 0; i < dates.size(); ++i) {
        const EventWindow w = as_data([&] { return event_window(series, dates[i], k, flags.include_event); });
        SeededStream stream = root.child(i);
        const TestOutcome r = run_test(w.sample, common.alpha, scheme, stream, flags.randomized);
        char line[160];
        std::snprintf(line, sizeof line, "%s  %s  %.8f  %.8f  %.6f  %s\n", format_date(dates[i]).c_str(),
                      format_date(w.resolved_date).c_str(), r.statistic, r.critical_value, r.p_value,
                      r.rejected ? "REJECT" : "FAIL TO REJECT");
        out << line;
    }
    return ok;
}

}  // namespace

std::vector<std::string> default_event_dates() {
    return {"2019-12-31", "2020-01-20", "2020-01-30", "2020-02-21", "2020-03-11"};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Permutation tests for distributional discontinuities in event studies"};
    app.require_subcommand(1);

    CommonFlags common;
    TestFlags test_flags;
    SimulateFlags sim_flags;
    GridFlags size_flags;
    GridFlags power_flags;
    EmpiricalFlags emp_flags;
    std::size_t empirical_permutations = 100'000;

    auto add_common = [&](CLI::App* sub, bool with_k_pair) {
        sub->add_option("--seed", common.seed, "Random seed (decimal 64-bit unsigned)");
        sub->add_option("--alpha", common.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
        sub->add_option("--out", common.out, "Output path (prefix for size/power)");
        if (with_k_pair) {
            auto* k = sub->add_option("--k", common.k, "Window size on each side");
            auto* k1 = sub->add_option("--k1", common.k1, "Pre-event window size");
            auto* k2 = sub->add_option("--k2", common.k2, "Post-event window size");
            k->excludes(k1)->excludes(k2);
        }
    };

    auto* test = app.add_subcommand("test", "Run the permutation test around an event in a price file");
    add_common(test, true);
    test->add_option("--permutations", common.permutations, "Random permutations m (M = m + 1)");
    test->add_option("--input", test_flags.input, "CSV with header date,adj_close")->required();
    test->add_option("--event-date", test_flags.event_date, "Event date YYYY-MM-DD")->required();
    test->add_flag("--nonrandomized", test_flags.nonrandomized, "Reject only when T > T*");
    test->add_flag("--include-event", test_flags.include_event, "Keep the event-day return in the post window");
    test->add_flag("--full", test_flags.full, "Enumerate all permutations (small windows only)");
    test->add_flag("--machine", test_flags.machine, "Print one key=value line");

    auto* simulate = app.add_subcommand("simulate", "Simulate one trading day and write minute returns as CSV");
    add_common(simulate, false);
    simulate->add_option("--config", sim_flags.config, "Simulation config file");
    simulate->add_option("--model", sim_flags.model, "Volatility model A or B");
    simulate->add_option("--driver", sim_flags.driver, "brownian, stable, or stable:BETA:C");
    simulate->add_option("--beta", sim_flags.beta, "Stable index for the stable driver");
    simulate->add_option("--trunc-c", sim_flags.trunc_c, "Truncation bound C for the stable driver");
    simulate->add_option("--jump-c", sim_flags.jump_c, "Volatility factor jump at the event");

    auto add_grid = [&](CLI::App* sub, GridFlags& g) {
        add_common(sub, false);
        sub->add_option("--permutations", common.permutations, "Random permutations m per test (default 1000)");
        sub->add_option("--config", g.config, "Experiment config file");
        sub->add_option("--trials", g.trials, "Monte Carlo trials per cell");
        sub->add_option("--model", g.models, "Models (A,B)")->delimiter(',');
        sub->add_option("--driver", g.drivers, "Drivers (brownian, stable:BETA:C)")->delimiter(',');
        sub->add_option("--k", g.ks, "Window sizes")->delimiter(',');
        sub->add_option("--threads", g.threads, "Worker threads (0 = all cores)");
        sub->add_flag("--quiet", g.quiet, "No progress output");
    };
    auto* size = app.add_subcommand("size", "Rejection rates under the null (c = 0)");
    add_grid(size, size_flags);
    auto* power = app.add_subcommand("power", "Rejection rates across volatility jump sizes");
    add_grid(power, power_flags);
    power->add_option("--c", power_flags.cs, "Jump sizes")->delimiter(',');

    auto* empirical = app.add_subcommand("empirical", "Non-randomized tests at the case-study event dates");
    add_common(empirical, false);
    empirical->add_option("--k", common.k, "Window size (default 5)");
    empirical->add_option("--permutations", empirical_permutations, "Random permutations m (default 100000)");
    empirical->add_option("--input", emp_flags.input, "CSV with header date,adj_close")->required();
    empirical->add_option("--events", emp_flags.events, "Event dates (default: case-study dates)")->delimiter(',');
    empirical->add_flag("--randomized", emp_flags.randomized, "Use the randomized test instead");
    empirical->add_flag("--include-event", emp_flags.include_event, "Keep the event-day return in the post window");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return usage_error;
    }

    try {
        if (test->parsed()) return cmd_test(common, test_flags, out);
        if (simulate->parsed()) {
            sim_flags.seed_given = simulate->count("--seed") > 0;
            return cmd_simulate(common, sim_flags, out);
        }
        if (size->parsed()) {
            ExperimentGrid base = ExperimentGrid::size_grid();
            const bool m_given = size->count("--permutations") > 0;
            const ExperimentGrid grid = build_grid(common, size_flags, base, m_given, size->count("--alpha") > 0,
                                                   size->count("--seed") > 0);
            for (double c : grid.c_values) {
                if (c != 0.0) throw UsageError("size experiments run under the null; use `power` for c > 0");
            }
            return cmd_grid("size", grid, common, size_flags.quiet, out, err);
        }
        if (power->parsed()) {
            power_flags.cs_given = power->count("--c") > 0;
            if (power_flags.cs_given && power_flags.cs.empty()) throw UsageError("--c: list of jump sizes is empty");
            ExperimentGrid base = ExperimentGrid::power_grid();
            base.models = {VolModel::a};
            const ExperimentGrid grid = build_grid(common, power_flags, base, power->count("--permutations") > 0,
                                                   power->count("--alpha") > 0, power->count("--seed") > 0);
            return cmd_grid("power", grid, common, power_flags.quiet, out, err);
        }
        if (empirical->parsed()) return cmd_empirical(common, emp_flags, empirical_permutations, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal_error;
    }
    return usage_error;
}

}  // namespace evperm::cli
