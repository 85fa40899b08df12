#pragma once

// Daily close prices -> log returns -> event windows.
//
// Input is a CSV with header `date,adj_close`, ISO dates (YYYY-MM-DD) in
// strictly increasing order and positive prices. Return i is
// log(P[i+1] / P[i]) and belongs to date i+1, the day it is realized on.

#include "evperm/stats_core.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace evperm {

using Date = std::chrono::year_month_day;

Date parse_date(const std::string& text);
std::string format_date(const Date& date);

struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> prices;
    std::vector<double> returns;
};

PriceSeries load_prices(const std::filesystem::path& path);
PriceSeries parse_prices(std::istream& in);

struct EventWindow {
    SplitSample sample;
    // Trading date the event resolved to (first trading date on or after the event).
    Date resolved_date;
    // Index into PriceSeries::returns of the return realized on resolved_date.
    std::size_t event_return = 0;
};

// pre = the k returns realized strictly before the event day, post = the k
// returns realized strictly after it; the event-day return is dropped unless
// include_event_return is set, in which case post starts with it.
// Throws RangeError when either side lacks k returns or the date is past the data.
EventWindow event_window(const PriceSeries& series, const Date& event_date, std::size_t k,
                         bool include_event_return = false);
// Unequal sides: k1 returns before, k2 after.
EventWindow event_window(const PriceSeries& series, const Date& event_date, std::size_t k1, std::size_t k2,
                         bool include_event_return);

}  // namespace evperm
