#include "vortexlab/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace vortexlab::log {

namespace {

Level resolve_level() {
  const char* env = std::getenv("VORTEX_LOG");
  if (env == nullptr) return Level::warn;
  std::string v(env);
  if (v == "error") return Level::error;
  if (v == "warn") return Level::warn;
  if (v == "info") return Level::info;
  if (v == "debug") return Level::debug;
  return Level::warn;
}

const char* tag(Level lvl) {
  switch (lvl) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
  }
  return "?";
}

std::mutex& io_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() {
  static Level lvl = resolve_level();
  return lvl;
}

bool enabled(Level lvl) {
  return static_cast<int>(lvl) <= static_cast<int>(level());
}

void write(Level lvl, const std::string& msg) {
  if (!enabled(lvl)) return;
  std::lock_guard<std::mutex> lock(io_mutex());
  std::fprintf(stderr, "[vortexlab][%s] %s\n", tag(lvl), msg.c_str());
}

}  // namespace vortexlab::log
