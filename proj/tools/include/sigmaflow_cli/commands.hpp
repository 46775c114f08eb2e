#pragma once

// Subcommands of the sigmaflow tool. Each returns the process exit code:
// 0 ok, 1 usage or data error, 2 not converged / not in the cone / checks failed.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "sigmaflow/cone.hpp"
#include "sigmaflow/flow.hpp"
#include "sigmaflow/verify.hpp"
#include "sigmaflow_cli/config.hpp"

namespace sigmaflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

nlohmann::json to_json(const ConeReport& cone);
nlohmann::json to_json(const SuiteReport& report);
nlohmann::json run_report(const RunConfig& config, const RunResult& result);

/// Output paths left empty in the config default to run.csv, report.json and
/// phi.snap inside out_dir; relative config paths are taken inside out_dir.
/// With neither, the report goes to `out`.
int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err);

int cmd_check_cone(const std::string& config_path, std::ostream& out, std::ostream& err);

int cmd_selftest(std::uint64_t seed, std::size_t trials, const std::string& out_path,
                 bool corrupt_tolerance, std::ostream& out, std::ostream& err);

/// snapshot_path empty: take `snapshot` from the config.
int cmd_functional(const std::string& config_path, const std::string& snapshot_path,
                   const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace sigmaflow::cli
