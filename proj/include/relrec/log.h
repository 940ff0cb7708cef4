// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace relrec {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Verbosity comes from the RELREC_LOG environment variable
// (error|warn|info|debug); unset or unrecognized means info.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* v = std::getenv("RELREC_LOG");
    if (v == nullptr) return LogLevel::kInfo;
    if (std::strcmp(v, "error") == 0) return LogLevel::kError;
    if (std::strcmp(v, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(v, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kInfo;
  }();
  return level;
}

inline void log_at(LogLevel level, const char* tag, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_error(const std::string& msg) { log_at(LogLevel::kError, "error", msg); }
inline void log_warn(const std::string& msg) { log_at(LogLevel::kWarn, "warn", msg); }
inline void log_info(const std::string& msg) { log_at(LogLevel::kInfo, "info", msg); }
inline void log_debug(const std::string& msg) { log_at(LogLevel::kDebug, "debug", msg); }

}  // namespace relrec
