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

#include "squash/povm_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace squash {

namespace {

using nlohmann::json;

std::string_view kind_name(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kBit: return "bit";
    case OutcomeKind::kVacuumFlag: return "vacuum_flag";
    case OutcomeKind::kRawSingle: return "raw_single";
    case OutcomeKind::kRawDouble: return "raw_double";
    case OutcomeKind::kRawNone: return "raw_none";
  }
  return "?";
}

OutcomeKind parse_kind(const std::string& name) {
  if (name == "bit") return OutcomeKind::kBit;
  if (name == "vacuum_flag") return OutcomeKind::kVacuumFlag;
  if (name == "raw_single") return OutcomeKind::kRawSingle;
  if (name == "raw_double") return OutcomeKind::kRawDouble;
  if (name == "raw_none") return OutcomeKind::kRawNone;
  throw FormatError("unknown outcome kind '" + name + "'");
}

json label_to_json(const OutcomeLabel& label) {
  json j = {{"kind", kind_name(label.kind)}};
  if (label.kind == OutcomeKind::kBit || label.kind == OutcomeKind::kRawSingle) j["b"] = label.bit;
  if (label.kind != OutcomeKind::kVacuumFlag) j["alpha"] = basis_name(label.basis);
  return j;
}

OutcomeLabel label_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("label must be an object");
  OutcomeLabel label;
  label.kind = parse_kind(j.at("kind").get<std::string>());
  if (label.kind == OutcomeKind::kBit || label.kind == OutcomeKind::kRawSingle) {
    label.bit = j.at("b").get<int>();
    if (label.bit != 0 && label.bit != 1) throw FormatError("label bit must be 0 or 1");
  }
  if (label.kind != OutcomeKind::kVacuumFlag) {
    try {
      label.basis = parse_basis(j.at("alpha").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  return label;
}

json matrix_to_json(const ComplexOperator& op) {
  json rows = json::array();
  for (std::size_t i = 0; i < op.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < op.dim(); ++k) row.push_back({op(i, k).real(), op(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexOperator matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) throw FormatError("matrix must have " + std::to_string(dim) + " rows");
  ComplexOperator op(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != dim) {
      throw FormatError("matrix row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const json& entry = row[k];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw FormatError("matrix entries must be [re, im] pairs");
      }
      op(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return op;
}

}  // namespace

std::string serialize_povm(const Povm& povm) {
  json elements = json::array();
  for (const PovmElement& e : povm.elements) {
    elements.push_back({{"label", label_to_json(e.label)}, {"matrix", matrix_to_json(e.op)}});
  }
  const json doc = {{"format_version", kFormatVersion}, {"dim", povm.dim}, {"elements", std::move(elements)}};
  return doc.dump(1) + "\n";
}

Povm parse_povm(std::string_view text) {
  Povm povm;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw FormatError("POVM file must hold a JSON object");
    if (doc.at("format_version").get<std::string>() != kFormatVersion) {
      throw FormatError("unsupported format_version '" + doc.at("format_version").get<std::string>() + "'");
    }
    const json& dim = doc.at("dim");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw FormatError("dim must be a positive integer");
    povm.dim = dim.get<std::size_t>();
    const json& elements = doc.at("elements");
    if (!elements.is_array()) throw FormatError("elements must be an array");
    for (const json& e : elements) {
      povm.elements.push_back({label_from_json(e.at("label")), matrix_from_json(e.at("matrix"), povm.dim)});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed POVM file: ") + e.what());
  }
  povm.validate();
  return povm;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing " + path.string());
}

void write_povm_file(const Povm& povm, const std::filesystem::path& path) {
  write_text_file(path, serialize_povm(povm));
}

Povm read_povm_file(const std::filesystem::path& path) { return parse_povm(read_text_file(path)); }

}  // namespace squash
