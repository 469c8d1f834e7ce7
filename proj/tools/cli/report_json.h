// Copyright 2026 The MetaFidelity Authors.
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

// Canonical JSON for reports: object keys sorted, doubles in their shortest
// round-trip form, two-space indentation, trailing newline. Identical inputs
// give byte-identical text.

#ifndef METAFIDELITY_TOOLS_CLI_REPORT_JSON_H_
#define METAFIDELITY_TOOLS_CLI_REPORT_JSON_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "metafidelity/attack_quality.h"
#include "metafidelity/fidelity.h"

namespace metafidelity::cli {

struct InputDigest {
  std::string role;    // e.g. "teacher"
  std::string sha256;  // lowercase hex
};

nlohmann::json FidelityReportToJson(const FidelityReport& report,
                                    const std::vector<InputDigest>& inputs,
                                    const PairingResult& pairing,
                                    bool lenient);

nlohmann::json QualityReportToJson(const QualityReport& report,
                                   const std::vector<InputDigest>& inputs);

std::string Serialize(const nlohmann::json& doc);

// Shortest text that parses back to the same double.
std::string FormatShortest(double value);

}  // namespace metafidelity::cli

#endif  // METAFIDELITY_TOOLS_CLI_REPORT_JSON_H_
