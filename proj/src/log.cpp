#include "svmap/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace svmap {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("SVMAP_LOG");
        if (env == nullptr) return LogLevel::warn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        return LogLevel::warn;
    }();
    return level;
}

namespace {

void emit(const char* tag, const char* fmt, va_list args) {
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

}  // namespace

void log_warn(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    emit("warn", fmt, args);
    va_end(args);
}

void log_info(const char* fmt, ...) {
    if (log_level() < LogLevel::info) return;
    va_list args;
    va_start(args, fmt);
    emit("info", fmt, args);
    va_end(args);
}

void log_debug(const char* fmt, ...) {
    if (log_level() < LogLevel::debug) return;
    va_list args;
    va_start(args, fmt);
    emit("debug", fmt, args);
    va_end(args);
}

}  // namespace svmap
