// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "sqdrift/fcidump.hpp"
#include "sqdrift/jordan_wigner.hpp"
#include "sqdrift/pipeline.hpp"
#include "sqdrift/subspace.hpp"

namespace {

sqdrift::RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sqdrift::IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw sqdrift::ParseError("config: invalid JSON in " + path + ": " + e.what());
  }
  return sqdrift::parse_run_config(j);
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out_dir) {
  auto cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (out_dir) cfg.output_dir = *out_dir;

  const auto result = sqdrift::run_pipeline(cfg);
  sqdrift::emit_report(result, cfg.output_dir);

  for (const auto& space : result.spaces) {
    std::printf("space %-8s  qubits %3d  E_HF %18.12f  E %18.12f  E_corr %14.12g  %s\n",
                space.label.c_str(), space.n_qubits, space.hf_energy, space.final_energy,
                space.final_correlation_energy, space.converged ? "converged" : "max-iterations");
  }
  std::printf("outputs written to %s\n", cfg.output_dir.c_str());
  return 0;
}

int cmd_fci(const std::string& fcidump_path) {
  const auto ham = sqdrift::parse_fcidump_file(fcidump_path);
  const auto result = sqdrift::fci_oracle(ham);
  const auto reference = sqdrift::hartree_fock_determinant(ham.n_orbitals(), ham.n_alpha(),
                                                           ham.n_beta());
  const double e_hf = sqdrift::hf_energy(ham, reference);
  std::printf("dimension   %zu\n", result.basis.size());
  std::printf("E_HF        %18.12f\n", e_hf);
  std::printf("E_FCI       %18.12f\n", result.ground_energy());
  std::printf("E_corr      %18.12f\n", sqdrift::correlation_energy(result.ground_energy(), e_hf));
  return 0;
}

int cmd_map(const std::string& fcidump_path, const std::string& ordering, double threshold) {
  const auto ham = sqdrift::parse_fcidump_file(fcidump_path);
  const auto mode = ordering == "interleaved" ? sqdrift::SpinOrbitalOrdering::interleaved
                                              : sqdrift::SpinOrbitalOrdering::blocked;
  const auto mapped = sqdrift::jordan_wigner(ham, mode, threshold);
  sqdrift::write_pauli_terms(std::cout, mapped);
  std::fprintf(stderr, "terms %zu  lambda %.12g  dropped %.3g\n", mapped.terms.size(),
               sqdrift::lambda_norm(mapped), mapped.dropped_weight);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized sample-based Krylov quantum diagonalization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "execute a pipeline run from a JSON config");
  run->add_option("config", config_path, "run configuration (JSON)")->required();
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out-dir", out_dir, "override the output directory");

  std::string fci_input;
  auto* fci = app.add_subcommand("fci", "exact ground energy of an FCIDUMP (desk scale)");
  fci->add_option("fcidump", fci_input, "FCIDUMP file")->required();

  std::string map_input, map_ordering = "blocked";
  double map_threshold = 1e-12;
  auto* map = app.add_subcommand("map", "dump the qubit Hamiltonian term list");
  map->add_option("fcidump", map_input, "FCIDUMP file")->required();
  map->add_option("--ordering", map_ordering, "spin-orbital ordering: blocked|interleaved")
      ->check(CLI::IsMember({"blocked", "interleaved"}));
  map->add_option("--threshold", map_threshold, "coefficient truncation threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir);
    if (fci->parsed()) return cmd_fci(fci_input);
    if (map->parsed()) return cmd_map(map_input, map_ordering, map_threshold);
  } catch (const sqdrift::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
