// Copyright 2026 The squash Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

// The four `squash` subcommands. Each returns a process exit code and
// writes human-readable progress to `log`.

namespace squash::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitExists = 0,
  kExitNotExists = 1,
  kExitInconclusive = 2,
  kExitUsage = 64,
  kExitDataError = 65,
  kExitIoError = 74,
};

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultMaxPhotons = 8;
inline constexpr int kSamplesPerBlock = 200;

/// Writes build_full_povm(protocol, photons). With `restrict_p` the POVM is
/// restricted to the P subspace of that block (n >= 2).
int cmd_build_povm(const std::string& protocol, int photons, const std::filesystem::path& out,
                   std::ostream& log, bool restrict_p = false);

int cmd_check(const std::filesystem::path& full, const std::filesystem::path& target,
              const std::optional<std::filesystem::path>& report, std::uint64_t seed, std::ostream& log);

int cmd_verify_protocol(const std::string& protocol, int max_photons,
                        const std::optional<std::filesystem::path>& report, std::ostream& log,
                        std::uint64_t seed = kDefaultSeed);

int cmd_witness(const std::filesystem::path& full, const std::filesystem::path& target,
                const std::filesystem::path& out, std::ostream& log);

/// Full command-line dispatch (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace squash::cli
