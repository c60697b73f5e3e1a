#include "mlogic/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mlogic::log {

namespace {

std::atomic<Level> current{Level::Warning};
std::mutex sink;

void emit(Level at, const char* tag, std::string_view message) {
    if (at < current.load(std::memory_order_relaxed)) return;
    std::lock_guard lock(sink);
    std::cerr << "[" << tag << "] " << message << '\n';
}

} // namespace

void set_level(Level level) noexcept { current.store(level, std::memory_order_relaxed); }
Level level() noexcept { return current.load(std::memory_order_relaxed); }

void warn(std::string_view message) { emit(Level::Warning, "warn", message); }
void info(std::string_view message) { emit(Level::Info, "info", message); }
void debug(std::string_view message) { emit(Level::Debug, "debug", message); }

} // namespace mlogic::log
