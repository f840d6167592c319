#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mnkurt::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotComputable = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kMeasureSchema = "mnkurt.measure/1";
inline constexpr const char* kResponseSchema = "mnkurt.response/1";
inline constexpr const char* kResponseMatrixSchema = "mnkurt.response-matrix/1";
inline constexpr const char* kCorrelationSchema = "mnkurt.correlation/1";

/// Environment variable that caps the worker count of batch subcommands.
inline constexpr const char* kJobsEnv = "MNKURT_JOBS";

/// Entry point of the command-line tool. `args` excludes the program name.
/// Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mnkurt::cli
