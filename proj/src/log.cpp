#include "echoloc/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace echoloc::log {

int verbosity()
{
    static const int level = [] {
        const char* env = std::getenv("ECHOLOC_VERBOSITY");
        if (env == nullptr || *env == '\0') return 1;
        try {
            return std::stoi(env);
        } catch (...) {
            return 1;
        }
    }();
    return level;
}

void warn(std::string_view message)
{
    if (verbosity() >= 1) std::cerr << "echoloc: warning: " << message << '\n';
}

void info(std::string_view message)
{
    if (verbosity() >= 2) std::cerr << "echoloc: " << message << '\n';
}

} // namespace echoloc::log
