// Copyright 2026 The PIR-CSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIRCSI_TOOLS_CLI_H_
#define PIRCSI_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pircsi/audit.h"
#include "pircsi/pmf.h"

namespace pircsi::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Environment variable holding the default port for serve and fetch.
inline constexpr char kPortEnv[] = "PIRCSI_PORT";
inline constexpr int kDefaultPort = 7070;

// Runs the `pircsi` tool. args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json RationalJson(const Rational& r);
nlohmann::json ToJson(const PosteriorReport& report);
nlohmann::json ToJson(const MonteCarloReport& report);
nlohmann::json ToJson(const RateReport& report);
nlohmann::json ToJson(const RpDistribution& dist);

}  // namespace pircsi::cli

#endif  // PIRCSI_TOOLS_CLI_H_
