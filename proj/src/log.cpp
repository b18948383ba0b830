#include "xreg/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace xreg {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("XREG_LOG");
        if (env == nullptr) return LogLevel::error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

void log_line(LogLevel level, const std::string& line) {
    if (static_cast<int>(level) <= static_cast<int>(log_level()))
        std::fprintf(stderr, "%s\n", line.c_str());
}

} // namespace xreg
