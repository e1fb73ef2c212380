#include "rfscape/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace rfscape {

LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* env = std::getenv("RFSCAPE_LOG");
    if (!env) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return lvl;
}

void log_error(const std::string& msg) {
  std::fprintf(stderr, "[rfscape] error: %s\n", msg.c_str());
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info)
    std::fprintf(stderr, "[rfscape] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::Debug)
    std::fprintf(stderr, "[rfscape] debug: %s\n", msg.c_str());
}

}  // namespace rfscape
