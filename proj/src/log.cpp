#include "mwumech/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

namespace mwumech {

LogLevel log_level() {
  static LogLevel level = [] {
    const char *env = std::getenv("MWUMECH_LOG");
    if (env == nullptr) return LogLevel::off;
    if (std::strcmp(env, "trace") == 0) return LogLevel::trace;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::off;
  }();
  return level;
}

void log_info(const std::string &message) {
  if (log_level() >= LogLevel::info) std::cerr << "[mwumech] " << message << "\n";
}

void log_trace(const std::string &message) {
  if (log_level() >= LogLevel::trace) std::cerr << "[mwumech:trace] " << message << "\n";
}

std::string strf(const char *fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  va_end(args);
  return out;
}

}  // namespace mwumech
