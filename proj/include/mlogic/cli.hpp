#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mlogic::cli {

/// Exit codes.
inline constexpr int kEstablished = 0;   ///< valid, provable, decomposition or check passed
inline constexpr int kRefuted = 1;       ///< refuted, unprovable, witness found, check failed
inline constexpr int kInconclusive = 2;  ///< bounded search found nothing, or a budget ran out
inline constexpr int kUsageError = 3;    ///< bad arguments, unreadable input, resource limits

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mlogic::cli
