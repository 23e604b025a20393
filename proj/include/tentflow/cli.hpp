// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "tentflow/run_config.hpp"

namespace tentflow {

/// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailed = 2;  ///< DIVERGED solve, UNSTABLE or FAIL verdict

/// tentflow {norm|verify|solve|sweep} [--config PATH] [--id ID] [--preset NAME] [--n INT]
///          [--alpha X] [--seed INT] [--out DIR] [--input PATH]... [--family U|BMO|V]
int cli_main(int argc, char** argv);

/// Executes a validated configuration, writing artifacts under config.output_dir.
int run(const RunConfig& config, std::ostream& log);

}  // namespace tentflow
