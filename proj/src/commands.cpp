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

#include "squash/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "squash/povm_io.hpp"
#include "squash/squasher.hpp"

namespace squash::cli {

namespace {

using nlohmann::json;

int exit_code_for(Status s) {
  switch (s) {
    case Status::kExists: return kExitExists;
    case Status::kNotExists: return kExitNotExists;
    case Status::kInconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

// Non-finite diagnostics (e.g. an unset residual) become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json witness_json(const Witness& w) {
  return {{"dims", {w.dims.first, w.dims.second}},
          {"vector", vector_json(w.state)},
          {"eigenvalue", number(w.eigenvalue)},
          {"expectation", number(w.expectation)},
          {"expectation_normalized", number(normalized_scale(w.expectation, w.dims.second))}};
}

json verdict_json(const Verdict& v) {
  const Diagnostics& d = v.diagnostics;
  json out = {{"status", status_name(v.status)},
              {"min_eigenvalue", number(d.min_eigenvalue)},
              {"residual", number(d.residual)},
              {"nullspace_dim", d.nullspace_dim},
              {"reduced_dim", d.reduced_dim},
              {"iterations", d.iterations}};
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

json report_header(const std::string& command, std::uint64_t seed) {
  return {{"tool", "squash"}, {"version", kToolVersion}, {"format_version", kFormatVersion},
          {"command", command}, {"seed", seed}};
}

// Writes `doc` if a path was requested; IO failures map to kExitIoError.
int emit_report(const std::optional<std::filesystem::path>& path, const json& doc, std::ostream& log, int code) {
  if (!path) return code;
  try {
    write_text_file(*path, doc.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return code;
}

// Single-pair analogue of verify_statistical_equivalence through the Kraus form.
double pair_deviation(const Povm& full, const Povm& target, const ComplexOperator& choi, int samples,
                      std::uint64_t seed) {
  const KrausSet kraus = extract_kraus(choi);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexOperator rho = random_density_matrix(full.dim, rng);
    const ComplexOperator out = kraus.apply(rho);
    for (const PovmElement& e : target.elements) {
      const ComplexOperator* fm = full.find(e.label);
      const double p_full = fm == nullptr ? 0.0 : (rho * *fm).trace().real();
      worst = std::max(worst, std::abs(p_full - (out * e.op).trace().real()));
    }
  }
  return worst;
}

struct PovmPair {
  Povm full;
  Povm target;
};

PovmPair load_pair(const std::filesystem::path& full, const std::filesystem::path& target) {
  PovmPair pair{read_povm_file(full), read_povm_file(target)};
  for (const PovmElement& e : pair.full.elements) {
    if (pair.target.find(e.label) == nullptr) {
      throw PovmError("dimension mismatch: target has no outcome " + e.label.to_string());
    }
  }
  return pair;
}

}  // namespace

int cmd_build_povm(const std::string& protocol, int photons, const std::filesystem::path& out, std::ostream& log,
                   bool restrict_p) {
  Protocol p;
  try {
    p = Protocol::parse(protocol);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (photons < 0) {
    log << "error: --photons must be >= 0\n";
    return kExitUsage;
  }
  Povm povm = build_full_povm(p, photons);
  if (restrict_p) {
    if (photons < 2) {
      log << "error: --restrict needs --photons >= 2\n";
      return kExitUsage;
    }
    povm = restrict_povm(povm, p_subspace(photons, p.bases, p.handedness).p_basis);
  }
  try {
    write_povm_file(povm, out);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  log << "wrote " << out.string() << ": dim " << povm.dim << ", " << povm.size() << " elements\n";
  return kExitExists;
}

int cmd_check(const std::filesystem::path& full, const std::filesystem::path& target,
              const std::optional<std::filesystem::path>& report, std::uint64_t seed, std::ostream& log) {
  PovmPair pair;
  SolveResult result;
  try {
    pair = load_pair(full, target);
    result = solve_squashing(pair.full, pair.target);
  } catch (const FormatError& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::invalid_argument& e) {  // PovmError, DimensionError
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  }

  const Verdict& v = result.verdict;
  json doc = report_header("check", seed);
  doc["status"] = status_name(v.status);
  json block = verdict_json(v);
  block["n"] = nullptr;
  block["dim"] = pair.full.dim;
  doc["blocks"] = json::array({block});
  doc["max_deviation"] = nullptr;
  doc["witness"] = nullptr;
  if (v.status == Status::kExists && v.choi) {
    const double dev = pair_deviation(pair.full, pair.target, *v.choi, kSamplesPerBlock, seed);
    doc["max_deviation"] = number(dev);
    log << "EXISTS: residual " << v.diagnostics.residual << ", max deviation " << dev << "\n";
  } else if (v.status == Status::kNotExists) {
    if (v.witness) doc["witness"] = witness_json(*v.witness);
    log << "NOT_EXISTS";
    if (!v.reason.empty()) log << " (" << v.reason << ")";
    if (v.witness) log << ": witness expectation " << v.witness->expectation;
    log << "\n";
  } else {
    log << "INCONCLUSIVE: min eigenvalue " << v.diagnostics.min_eigenvalue << "\n";
  }
  return emit_report(report, doc, log, exit_code_for(v.status));
}

int cmd_verify_protocol(const std::string& protocol, int max_photons,
                        const std::optional<std::filesystem::path>& report, std::ostream& log, std::uint64_t seed) {
  Protocol p;
  try {
    p = Protocol::parse(protocol);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (max_photons < 1) {
    log << "error: --max-photons must be >= 1\n";
    return kExitUsage;
  }

  ProtocolResult result;
  try {
    result = check_protocol(p, max_photons);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  }

  json doc = report_header("verify", seed);
  doc["protocol"] = p.label();
  doc["max_photons"] = max_photons;
  doc["status"] = status_name(result.overall);
  json blocks = json::array();
  CompositeSquasher existing;
  existing.target_dim = 2;
  for (const BlockResult& b : result.blocks) {
    json j = verdict_json(b.verdict);
    j["n"] = b.n;
    j["kind"] = block_kind_name(b.kind);
    j["space_dim"] = b.space_dim;
    j["p_dim"] = b.p_dim;
    blocks.push_back(std::move(j));
    if (b.verdict.status == Status::kExists && b.block) existing.blocks.push_back(*b.block);
    log << "n=" << b.n << " " << block_kind_name(b.kind) << " " << status_name(b.verdict.status) << "\n";
  }
  doc["blocks"] = std::move(blocks);

  doc["max_deviation"] = nullptr;
  if (!existing.blocks.empty()) {
    const std::vector<Povm> full = full_povm_blocks(p, max_photons);
    const double dev =
        verify_statistical_equivalence(full, build_target_povm(p), existing, kSamplesPerBlock, seed);
    doc["max_deviation"] = number(dev);
    log << "max deviation over EXISTS blocks: " << dev << "\n";
  }

  doc["witness"] = nullptr;
  if (const BlockResult* fail = result.first_failure()) {
    doc["failing_block"] = fail->n;
    if (fail->verdict.witness) {
      json w = witness_json(*fail->verdict.witness);
      w["n"] = fail->n;
      doc["witness"] = std::move(w);
    }
  }
  log << "overall: " << status_name(result.overall) << "\n";
  return emit_report(report, doc, log, exit_code_for(result.overall));
}

int cmd_witness(const std::filesystem::path& full, const std::filesystem::path& target,
                const std::filesystem::path& out, std::ostream& log) {
  PovmPair pair;
  ParameterizedChoi pc;
  try {
    pair = load_pair(full, target);
    pc = solve_affine(assemble_constraints(pair.full, pair.target));
  } catch (const InfeasibleError& e) {
    log << "NOT_EXISTS: " << e.reason() << " (residual " << e.residual() << ")\n";
    json doc = report_header("witness", 0);
    doc["status"] = status_name(Status::kNotExists);
    doc["reason"] = e.reason();
    doc["residual"] = number(e.residual());
    doc["witness"] = nullptr;
    return emit_report(out, doc, log, kExitNotExists);
  } catch (const FormatError& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  }

  if (pc.free_parameters() > 0) {
    log << "underdetermined: " << pc.free_parameters() << " free parameters\n";
    return kExitInconclusive;
  }

  const ComplexOperator& tau = pc.particular;
  const EigenDecomposition eig = hermitian_eig(tau);
  json doc = report_header("witness", 0);
  doc["dims"] = {pc.dims.first, pc.dims.second};
  doc["min_eigenvalue"] = number(eig.min_eigenvalue());
  if (eig.min_eigenvalue() >= -1e-6) {
    doc["status"] = status_name(Status::kExists);
    doc["witness"] = nullptr;
    log << "PSD - no witness (min eigenvalue " << eig.min_eigenvalue() << ")\n";
    return emit_report(out, doc, log, kExitExists);
  }

  Witness w;
  w.state = eig.min_eigenvector();
  w.eigenvalue = eig.min_eigenvalue();
  w.expectation = w.state.dot(tau.matrix() * w.state).real();
  w.dims = pc.dims;
  if (!(w.expectation < 0.0)) {
    log << "error: witness expectation " << w.expectation << " is not negative\n";
    return kExitDataError;
  }
  doc["status"] = status_name(Status::kNotExists);
  doc["witness"] = witness_json(w);
  log << "witness: eigenvalue " << w.eigenvalue << ", normalized expectation "
      << normalized_scale(w.expectation, w.dims.second) << "\n";
  return emit_report(out, doc, log, kExitNotExists);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide whether a multi-photon measurement squashes onto a qubit measurement"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string protocol;
  int photons = 0;
  bool restrict_p = false;
  std::string out_path, full_path, target_path, report_path;
  std::uint64_t seed = kDefaultSeed;
  int max_photons = kDefaultMaxPhotons;

  CLI::App* build = app.add_subcommand("build-povm", "Write the full POVM of one photon-number block");
  build->add_option("--protocol", protocol, "bb84 or six-state")->required();
  build->add_option("--photons", photons, "Photon number n >= 0")->required();
  build->add_option("--out", out_path, "Output PovmFile")->required();
  build->add_flag("--restrict", restrict_p, "Restrict to the P subspace (n >= 2)");

  CLI::App* check = app.add_subcommand("check", "Decide a single full/target POVM pair");
  check->add_option("--full", full_path, "Full PovmFile")->required();
  check->add_option("--target", target_path, "Target PovmFile")->required();
  check->add_option("--report", report_path, "Report file");
  check->add_option("--seed", seed, "Sampling seed");

  CLI::App* verify = app.add_subcommand("verify", "Verify a protocol block by block");
  verify->add_option("--protocol", protocol, "bb84 or six-state")->required();
  verify->add_option("--max-photons", max_photons, "Largest photon number");
  verify->add_option("--report", report_path, "Report file");
  verify->add_option("--seed", seed, "Sampling seed");

  CLI::App* witness = app.add_subcommand("witness", "Extract a negativity witness");
  witness->add_option("--full", full_path, "Full PovmFile")->required();
  witness->add_option("--target", target_path, "Target PovmFile")->required();
  witness->add_option("--out", out_path, "Witness file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto optional_path = [](const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
  };
  if (*build) return cmd_build_povm(protocol, photons, out_path, err, restrict_p);
  if (*check) return cmd_check(full_path, target_path, optional_path(report_path), seed, err);
  if (*verify) return cmd_verify_protocol(protocol, max_photons, optional_path(report_path), err, seed);
  if (*witness) return cmd_witness(full_path, target_path, out_path, err);
  return kExitUsage;
}

}  // namespace squash::cli
