// Copyright 2026 The JA-GNN Authors
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

#include <iosfwd>

namespace jagnn {

// Default config path for subcommands that take --config.
inline constexpr const char* kConfigEnvVar = "JAGNN_CONFIG";

/// Runs the command line. Errors are written to `err` prefixed with
/// "error: " and yield a non-zero return.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jagnn
