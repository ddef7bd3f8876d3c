#pragma once

#include <spdlog/spdlog.h>

namespace fluxon {

/// Applies the FLUXON_LOG environment variable (trace, debug, info, warn,
/// error, off) to the default logger. Defaults to warn.
void init_logging_from_env();

}  // namespace fluxon
