#pragma once

#include <string_view>

namespace mlogic::log {

enum class Level { Debug = 0, Info = 1, Warning = 2, Silent = 3 };

void set_level(Level level) noexcept;
Level level() noexcept;

void warn(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

} // namespace mlogic::log
