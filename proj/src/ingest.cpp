#include "evperm/ingest.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace evperm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    const std::string t = trim(text);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') throw InvalidInput("bad date '" + text + "' (want YYYY-MM-DD)");
    auto field = [&](std::size_t pos, std::size_t len, auto& out) {
        auto [ptr, ec] = std::from_chars(t.data() + pos, t.data() + pos + len, out);
        if (ec != std::errc() || ptr != t.data() + pos + len) throw InvalidInput("bad date '" + text + "'");
    };
    field(0, 4, y);
    field(5, 2, m);
    field(8, 2, d);
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) throw InvalidInput("invalid calendar date '" + text + "'");
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

PriceSeries parse_prices(std::istream& in) {
    PriceSeries series;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            if (t != "date,adj_close") throw ParseError("expected header 'date,adj_close'", line_no);
            header_seen = true;
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw ParseError("expected two fields", line_no);
        }
        Date date;
        try {
            date = parse_date(t.substr(0, comma));
        } catch (const InvalidInput& e) {
            throw ParseError(e.what(), line_no);
        }
        const std::string price_text = trim(t.substr(comma + 1));
        double price = 0.0;
        auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
        if (ec != std::errc() || ptr != price_text.data() + price_text.size() || price_text.empty()) {
            throw ParseError("bad price '" + price_text + "'", line_no);
        }
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw ValidationError("line " + std::to_string(line_no) + ": price must be positive");
        }
        if (!series.dates.empty() && !(series.dates.back() < date)) {
            throw ValidationError("line " + std::to_string(line_no) + ": dates must be strictly increasing");
        }
        series.dates.push_back(date);
        series.prices.push_back(price);
    }
    if (!header_seen) throw ParseError("empty price file");
    if (series.prices.size() < 2) throw ValidationError("need at least two prices");

    series.returns.resize(series.prices.size() - 1);
    for (std::size_t i = 0; i + 1 < series.prices.size(); ++i) {
        series.returns[i] = std::log(series.prices[i + 1] / series.prices[i]);
    }
    return series;
}

PriceSeries load_prices(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open price file " + path.string());
    return parse_prices(in);
}

EventWindow event_window(const PriceSeries& series, const Date& event_date, std::size_t k, bool include_event_return) {
    return event_window(series, event_date, k, k, include_event_return);
}

EventWindow event_window(const PriceSeries& series, const Date& event_date, std::size_t k1, std::size_t k2,
                         bool include_event_return) {
    if (k1 == 0 || k2 == 0) throw RangeError("window sizes must be >= 1");
    const auto it = std::lower_bound(series.dates.begin(), series.dates.end(), event_date);
    if (it == series.dates.end()) {
        throw RangeError("event date " + format_date(event_date) + " is after the last trading date");
    }
    const auto day = static_cast<std::size_t>(it - series.dates.begin());
    if (day == 0) {
        throw RangeError("event date " + format_date(event_date) + " resolves to the first price; no event return");
    }
    const std::size_t event_return = day - 1;
    if (event_return < k1) {
        throw RangeError("event " + format_date(*it) + " has " + std::to_string(event_return) +
                         " returns before it, need " + std::to_string(k1) + " (short by " +
                         std::to_string(k1 - event_return) + ")");
    }
    const std::size_t post_begin = include_event_return ? event_return : event_return + 1;
    const std::size_t available = series.returns.size() - post_begin;
    if (available < k2) {
        throw RangeError("event " + format_date(*it) + " has " + std::to_string(available) +
                         " returns after it, need " + std::to_string(k2) + " (short by " +
                         std::to_string(k2 - available) + ")");
    }
    const auto& r = series.returns;
    std::vector<double> pre(r.begin() + static_cast<std::ptrdiff_t>(event_return - k1),
                            r.begin() + static_cast<std::ptrdiff_t>(event_return));
    std::vector<double> post(r.begin() + static_cast<std::ptrdiff_t>(post_begin),
                             r.begin() + static_cast<std::ptrdiff_t>(post_begin + k2));
    return EventWindow{SplitSample(std::move(pre), std::move(post)), *it, event_return};
}

}  // namespace evperm
