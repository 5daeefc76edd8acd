#pragma once

#include <string>

namespace vortexlab::log {

enum class Level : int { error = 0, warn = 1, info = 2, debug = 3 };

/// Active level, resolved once from the VORTEX_LOG environment variable
/// (error|warn|info|debug, default warn). Unknown values fall back to warn.
Level level();

bool enabled(Level lvl);

/// Writes "[vortexlab][lvl] msg\n" to stderr when lvl is enabled.
void write(Level lvl, const std::string& msg);

inline void error(const std::string& msg) { write(Level::error, msg); }
inline void warn(const std::string& msg) { write(Level::warn, msg); }
inline void info(const std::string& msg) { write(Level::info, msg); }
inline void debug(const std::string& msg) { write(Level::debug, msg); }

}  // namespace vortexlab::log
