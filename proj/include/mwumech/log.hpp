#pragma once
// Diagnostics on standard error, gated by the MWUMECH_LOG environment variable
// (off | info | trace).  Standard output is reserved for reports.

#include <string>

namespace mwumech {

enum class LogLevel { off = 0, info = 1, trace = 2 };

LogLevel log_level();

void log_info(const std::string &message);
void log_trace(const std::string &message);

// printf-style formatting helper (C++20 std::format is unavailable on GCC 11).
std::string strf(const char *fmt, ...);

}  // namespace mwumech
