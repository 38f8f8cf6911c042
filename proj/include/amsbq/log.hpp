#ifndef AMSBQ_LOG_HPP
#define AMSBQ_LOG_HPP

#include <string>

namespace amsbq {

// Verbosity is read once from the AMSBQ_LOG environment variable:
// "error" (default), "warn", "info", or "debug". Messages go to stderr.
enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();

void log_message(LogLevel level, const std::string& text);

inline void log_warn(const std::string& text) { log_message(LogLevel::warn, text); }
inline void log_info(const std::string& text) { log_message(LogLevel::info, text); }
inline void log_debug(const std::string& text) { log_message(LogLevel::debug, text); }

}  // namespace amsbq

#endif
