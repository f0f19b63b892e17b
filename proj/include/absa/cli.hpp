// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace absa::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kDataFault = 2, kNumericFault = 3 };

/// Runs one command line (without the program name). Verbs: train, predict,
/// pipeline, evaluate, gradcheck, inspect. Never throws; failures map onto
/// ExitCode with a message on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace absa::cli
