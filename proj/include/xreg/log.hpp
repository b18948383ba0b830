#pragma once

#include <string>

namespace xreg {

// Log level comes from env var XREG_LOG: error (default), info, debug.
enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level();

// Line-oriented "key=value" logging to stderr.
void log_line(LogLevel level, const std::string& line);

inline void log_info(const std::string& line) { log_line(LogLevel::info, line); }
inline void log_debug(const std::string& line) { log_line(LogLevel::debug, line); }
inline void log_error(const std::string& line) { log_line(LogLevel::error, line); }

} // namespace xreg
