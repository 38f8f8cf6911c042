#include "amsbq/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace amsbq {

namespace {

LogLevel parse_env() {
  const char* env = std::getenv("AMSBQ_LOG");
  if (env == nullptr) return LogLevel::error;
  if (std::strcmp(env, "debug") == 0 || std::strcmp(env, "3") == 0) return LogLevel::debug;
  if (std::strcmp(env, "info") == 0 || std::strcmp(env, "2") == 0) return LogLevel::info;
  if (std::strcmp(env, "warn") == 0 || std::strcmp(env, "1") == 0) return LogLevel::warn;
  return LogLevel::error;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

LogLevel log_level() {
  static const LogLevel level = parse_env();
  return level;
}

void log_message(LogLevel level, const std::string& text) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* tags[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::fprintf(stderr, "[amsbq %s] %s\n", tags[static_cast<int>(level)], text.c_str());
}

}  // namespace amsbq
