// Copyright 2026 The Foresight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORESIGHT_BENCH_COMMANDS_H_
#define FORESIGHT_BENCH_COMMANDS_H_

#include <string>
#include <vector>

#include "foresight/bench/config.h"

namespace foresight {

enum ExitCode : int {
  kExitOk = 0,
  kExitBenchmarkFailure = 1,  // some episodes errored
  kExitConfigError = 2,       // configuration, input or transport failure
};

// Subcommands; each returns an exit code and lets exceptions escape.
int GenDataCommand(const BenchConfig& config);
int GenTasksCommand(const BenchConfig& config);
int TrainClassifierCommand(const BenchConfig& config);
int RunCommand(const BenchConfig& config);
int EvalMetricsCommand(const BenchConfig& config);
int StudyCommand(const BenchConfig& config);

// Reads VP2_LOG (error, info, debug) and installs a stderr logger.
void ConfigureLogging();

// Full command line: subcommand, --config file, then flags. Flags override
// the config file, which overrides built-in defaults.
int RunCli(const std::vector<std::string>& args);

}  // namespace foresight

#endif  // FORESIGHT_BENCH_COMMANDS_H_
