#ifndef SVMAP_LOG_HPP
#define SVMAP_LOG_HPP

namespace svmap {

// Verbosity from the SVMAP_LOG environment variable: "debug", "info",
// or anything else (including unset) for warnings only.
enum class LogLevel { warn = 0, info = 1, debug = 2 };

LogLevel log_level();

void log_warn(const char* fmt, ...);
void log_info(const char* fmt, ...);
void log_debug(const char* fmt, ...);

}  // namespace svmap

#endif
