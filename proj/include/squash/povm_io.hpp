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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "squash/detectors.hpp"

// PovmFile, format_version "1":
//   {"format_version": "1", "dim": d,
//    "elements": [{"label": {"kind": "bit", "b": 0, "alpha": "z"},
//                  "matrix": [[[re, im], ...], ...]}, ...]}
// Doubles are written in shortest round-trip form, so reading a written
// file reproduces every entry bit for bit.

namespace squash {

inline constexpr const char* kFormatVersion = "1";

/// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize_povm(const Povm& povm);

/// Parses and validates (Povm::validate). Throws FormatError for syntax or
/// schema problems and PovmError for invariant violations.
Povm parse_povm(std::string_view text);

void write_povm_file(const Povm& povm, const std::filesystem::path& path);
Povm read_povm_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Throws std::ios_base::failure when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace squash
