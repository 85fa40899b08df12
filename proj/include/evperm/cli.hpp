#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evperm::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, internal_error = 3 };

// Entry point behind the `evperm` executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Event dates of the COVID-19 case study.
std::vector<std::string> default_event_dates();

}  // namespace evperm::cli
