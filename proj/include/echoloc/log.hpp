#pragma once

#include <string_view>

namespace echoloc::log {

/// Verbosity is read once from ECHOLOC_VERBOSITY: 0 silent, 1 warnings (default), 2 info.
int verbosity();

void warn(std::string_view message);
void info(std::string_view message);

} // namespace echoloc::log
