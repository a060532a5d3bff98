#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace kgre::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

// Log level comes from the KGRE_LOG environment variable (debug|info|warn|error).
// Default is warn; everything else is controlled by config/flags.
inline Level threshold() {
  static Level lvl = [] {
    const char* env = std::getenv("KGRE_LOG");
    if (env == nullptr) return Level::warn;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "error") == 0) return Level::error;
    return Level::warn;
  }();
  return lvl;
}

template <typename... Args>
void emit(Level lvl, const char* tag, const char* fmt, Args... args) {
  if (lvl < threshold()) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

template <typename... Args>
void debug(const char* fmt, Args... args) { emit(Level::debug, "debug", fmt, args...); }
template <typename... Args>
void info(const char* fmt, Args... args) { emit(Level::info, "info", fmt, args...); }
template <typename... Args>
void warn(const char* fmt, Args... args) { emit(Level::warn, "warn", fmt, args...); }
template <typename... Args>
void error(const char* fmt, Args... args) { emit(Level::error, "error", fmt, args...); }

}  // namespace kgre::log
