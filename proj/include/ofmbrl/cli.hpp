/*
 Copyright 2026 The ofmbrl Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef OFMBRL_CLI_HPP
#define OFMBRL_CLI_HPP

#include "ofmbrl/scenario.hpp"

#include "json.hpp"

#include <iosfwd>

namespace ofmbrl {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitFailure = 1,  ///< usage or I/O problem outside the documented contract
    kExitConfigError = 2,
    kExitDivergence = 3,
    kExitVerificationFailed = 4,
};

/// Summary numbers written next to the trace by `run`.
nlohmann::json run_metrics(const SimulationTrace& trace, const ControlProblem& problem,
                           const std::optional<Vector>& ideal);

/**
 * ofmbrl run <scenario> [--out DIR] [--dt X] [--t-final X] [--dump-config]
 * ofmbrl verify <scenario> [--json FILE] [--dump-config]
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ofmbrl

#endif  // OFMBRL_CLI_HPP
