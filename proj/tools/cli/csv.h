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

#ifndef METAFIDELITY_TOOLS_CLI_CSV_H_
#define METAFIDELITY_TOOLS_CLI_CSV_H_

#include <iosfwd>
#include <string>

#include "metafidelity/stats.h"

namespace metafidelity::cli {

// Header row of treatment names, then one row of numbers per subject.
// Numbers always use '.' as decimal point regardless of locale. Throws
// kParse with the line number for ragged rows or unparsable cells.
ObservationMatrix ReadObservationCsv(std::istream& in);

// Quotes a CSV field when it contains a comma, quote or line break.
std::string CsvField(const std::string& text);

}  // namespace metafidelity::cli

#endif  // METAFIDELITY_TOOLS_CLI_CSV_H_
