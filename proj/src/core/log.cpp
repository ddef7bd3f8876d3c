#include "fluxon/core/log.hpp"

#include <cstdlib>
#include <string>

namespace fluxon {

void init_logging_from_env() {
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FLUXON_LOG")) {
    auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour exact "off".
    if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
  }
  spdlog::set_level(level);
}

}  // namespace fluxon
