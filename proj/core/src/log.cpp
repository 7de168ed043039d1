#include "gmfg/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace gmfg::log {

namespace {

Level parse_level() {
    const char* env = std::getenv("GMFG_LOG");
    if (!env) return Level::warn;
    if (std::strcmp(env, "error") == 0) return Level::error;
    if (std::strcmp(env, "warn") == 0) return Level::warn;
    if (std::strcmp(env, "info") == 0) return Level::info;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    return Level::warn;
}

const char* tag(Level level) {
    switch (level) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        default: return "debug";
    }
}

}  // namespace

Level threshold() {
    static const Level value = parse_level();
    return value;
}

void write(Level level, const std::string& message) {
    if (level > threshold()) return;
    std::fprintf(stderr, "[gmfg %s] %s\n", tag(level), message.c_str());
}

}  // namespace gmfg::log
