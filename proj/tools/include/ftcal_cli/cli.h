// Copyright 2026 The ftcal Authors.
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ftcal/error.h"

namespace ftcal::cli {

/// Process exit codes of the `ftcal` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,             // bad flags, invalid configuration
  kExitIo = 3,                // unreadable input, unwritable output
  kExitNotIdentifiable = 4,   // rank-deficient offset or calibration system
  kExitDegenerateSpan = 5,    // readings do not span three dimensions
  kExitIllConditioned = 6,    // calibration ill-conditioned, no --force
  kExitDataError = 7,         // malformed or out-of-range input data
  kExitGeometryError = 8,     // validation surface fit failed
};

int exit_code_for(ErrorKind kind);

/// Runs the tool on `args` (without the program name). Reports go to the
/// paths given by flags or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Lines `key=value`; blank lines and lines starting with '#' are skipped.
/// Throws kInvalidArgument for a malformed line and kIoError when the file
/// cannot be read.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);

}  // namespace ftcal::cli
