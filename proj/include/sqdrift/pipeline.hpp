// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqdrift/errors.hpp"
#include "sqdrift/exact_evolution.hpp"
#include "sqdrift/extension.hpp"
#include "sqdrift/fcidump.hpp"
#include "sqdrift/hamiltonian.hpp"
#include "sqdrift/jordan_wigner.hpp"
#include "sqdrift/qdrift.hpp"
#include "sqdrift/recovery.hpp"
#include "sqdrift/rng.hpp"
#include "sqdrift/statevector.hpp"
#include "sqdrift/subspace.hpp"

namespace sqdrift {

struct ActiveSpaceSpec {
  std::vector<int> frozen;
  std::vector<int> active;
};

/// Full run configuration. Every field has a default; unknown JSON keys are
/// rejected so typos cannot silently fall back to defaults.
struct RunConfig {
  std::string input;
  std::string method = "sqdrift";  // sqdrift | skqd-exact | extsqdrift
  std::uint64_t qdrift_samples = 300;
  double dt = 0.0;  // 0 = choose 1/lambda at run time
  int krylov_depth = 4;
  std::uint64_t shots = 10000;
  int realizations = 8;
  std::size_t subspace_cap = 0;  // per-spin string cap; 0 = uncapped
  int recovery_iterations = 3;
  std::size_t carry_over_keep = 100;
  std::uint64_t seed = 12345;
  double noise_probability = 0.0;
  std::string output_dir = ".";
  std::string excitation_level = "singles_doubles";  // extsqdrift: singles | singles_doubles
  bool extend_uncapped = false;
  bool seed_reference = true;  // always include the reference determinant
  double solver_tol = 1e-8;
  double convergence_threshold = 1e-6;
  double truncation_threshold = 1e-12;
  int eigenpairs = 1;
  bool export_basis = false;
  std::vector<ActiveSpaceSpec> active_spaces;  // empty = one run on the full space

  void validate() const {
    if (input.empty()) throw ParseError("config: 'input' (FCIDUMP path) is required");
    if (method != "sqdrift" && method != "skqd-exact" && method != "extsqdrift")
      throw ParseError("config: unknown method '" + method + "'");
    if (excitation_level != "singles" && excitation_level != "singles_doubles")
      throw ParseError("config: unknown excitation_level '" + excitation_level + "'");
    if (dt < 0.0) throw ParseError("config: dt must be positive (or 0 for automatic)");
    if (krylov_depth < 0 || realizations < 0 || recovery_iterations < 0 || eigenpairs < 1)
      throw ParseError("config: counts must be non-negative (eigenpairs >= 1)");
    if (noise_probability < 0.0 || noise_probability > 0.5)
      throw ParseError("config: noise_probability must lie in [0, 0.5]");
  }
};

inline RunConfig parse_run_config(const nlohmann::json& j) {
  static const std::map<std::string, int> known = {
      {"input", 0},          {"method", 0},          {"qdrift_samples", 0},
      {"dt", 0},             {"krylov_depth", 0},    {"shots", 0},
      {"realizations", 0},   {"subspace_cap", 0},    {"recovery_iterations", 0},
      {"carry_over_keep", 0}, {"seed", 0},           {"noise_probability", 0},
      {"output_dir", 0},     {"excitation_level", 0}, {"extend_uncapped", 0},
      {"seed_reference", 0}, {"solver_tol", 0},      {"convergence_threshold", 0},
      {"truncation_threshold", 0}, {"eigenpairs", 0}, {"export_basis", 0},
      {"active_spaces", 0}};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ParseError("config: unknown key '" + key + "'");

  RunConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("input", cfg.input);
  get("method", cfg.method);
  get("qdrift_samples", cfg.qdrift_samples);
  get("dt", cfg.dt);
  get("krylov_depth", cfg.krylov_depth);
  get("shots", cfg.shots);
  get("realizations", cfg.realizations);
  get("subspace_cap", cfg.subspace_cap);
  get("recovery_iterations", cfg.recovery_iterations);
  get("carry_over_keep", cfg.carry_over_keep);
  get("seed", cfg.seed);
  get("noise_probability", cfg.noise_probability);
  get("output_dir", cfg.output_dir);
  get("excitation_level", cfg.excitation_level);
  get("extend_uncapped", cfg.extend_uncapped);
  get("seed_reference", cfg.seed_reference);
  get("solver_tol", cfg.solver_tol);
  get("convergence_threshold", cfg.convergence_threshold);
  get("truncation_threshold", cfg.truncation_threshold);
  get("eigenpairs", cfg.eigenpairs);
  get("export_basis", cfg.export_basis);
  if (j.contains("active_spaces")) {
    for (const auto& spec : j.at("active_spaces")) {
      for (const auto& [key, value] : spec.items())
        if (key != "frozen" && key != "active")
          throw ParseError("config: unknown active_spaces key '" + key + "'");
      ActiveSpaceSpec s;
      if (spec.contains("frozen")) s.frozen = spec.at("frozen").get<std::vector<int>>();
      if (spec.contains("active")) s.active = spec.at("active").get<std::vector<int>>();
      cfg.active_spaces.push_back(std::move(s));
    }
  }
  cfg.validate();
  return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j{{"input", cfg.input},
                   {"method", cfg.method},
                   {"qdrift_samples", cfg.qdrift_samples},
                   {"dt", cfg.dt},
                   {"krylov_depth", cfg.krylov_depth},
                   {"shots", cfg.shots},
                   {"realizations", cfg.realizations},
                   {"subspace_cap", cfg.subspace_cap},
                   {"recovery_iterations", cfg.recovery_iterations},
                   {"carry_over_keep", cfg.carry_over_keep},
                   {"seed", cfg.seed},
                   {"noise_probability", cfg.noise_probability},
                   {"output_dir", cfg.output_dir},
                   {"excitation_level", cfg.excitation_level},
                   {"extend_uncapped", cfg.extend_uncapped},
                   {"seed_reference", cfg.seed_reference},
                   {"solver_tol", cfg.solver_tol},
                   {"convergence_threshold", cfg.convergence_threshold},
                   {"truncation_threshold", cfg.truncation_threshold},
                   {"eigenpairs", cfg.eigenpairs},
                   {"export_basis", cfg.export_basis}};
  j["active_spaces"] = nlohmann::json::array();
  for (const auto& s : cfg.active_spaces)
    j["active_spaces"].push_back({{"frozen", s.frozen}, {"active", s.active}});
  return j;
}

inline double correlation_energy(double e_total, double e_hf) { return e_total - e_hf; }

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double correlation_energy = 0.0;
  std::size_t subspace_dimension = 0;
  double invalid_fraction = 0.0;
  std::string basis_hash;
  std::uint64_t recovered_count = 0;
  std::uint64_t carried_over_count = 0;
  std::uint64_t uniform_fallbacks = 0;
};

struct SpaceRecord {
  std::string label;
  int n_active_orbitals = 0;
  int n_electrons = 0;
  int n_qubits = 0;
  double hf_energy = 0.0;
  double lambda = 0.0;
  double dt = 0.0;
  std::vector<IterationRecord> iterations;
  double final_energy = 0.0;
  double final_correlation_energy = 0.0;
  bool converged = false;
  // Raw measurement record: per (time index, realization), bitstring -> count.
  std::vector<SampleSet> samples;
};

struct RunResult {
  nlohmann::json config_echo;
  struct Metadata {
    std::uint64_t master_seed = 0;
    std::uint64_t qdrift_samples = 0;
    std::vector<double> time_grid;
    double lambda = 0.0;
    double truncation_threshold = 0.0;
    std::string ordering = "blocked";
  } metadata;
  std::vector<SpaceRecord> spaces;
  double final_energy = 0.0;
  double final_correlation_energy = 0.0;
  std::map<std::string, double> wall_times;  // seconds per stage
  std::string error;                         // empty on success
};

inline nlohmann::json result_to_json(const RunResult& result) {
  nlohmann::json j;
  j["config"] = result.config_echo;
  j["metadata"] = {{"master_seed", result.metadata.master_seed},
                   {"qdrift_samples", result.metadata.qdrift_samples},
                   {"time_grid", result.metadata.time_grid},
                   {"lambda", result.metadata.lambda},
                   {"truncation_threshold", result.metadata.truncation_threshold},
                   {"ordering", result.metadata.ordering}};
  j["spaces"] = nlohmann::json::array();
  for (const auto& space : result.spaces) {
    nlohmann::json s{{"label", space.label},
                     {"n_active_orbitals", space.n_active_orbitals},
                     {"n_electrons", space.n_electrons},
                     {"n_qubits", space.n_qubits},
                     {"hf_energy", space.hf_energy},
                     {"lambda", space.lambda},
                     {"dt", space.dt},
                     {"final_energy", space.final_energy},
                     {"final_correlation_energy", space.final_correlation_energy},
                     {"converged", space.converged}};
    s["iterations"] = nlohmann::json::array();
    for (const auto& it : space.iterations)
      s["iterations"].push_back({{"iteration", it.iteration},
                                 {"energy", it.energy},
                                 {"correlation_energy", it.correlation_energy},
                                 {"dimension", it.subspace_dimension},
                                 {"invalid_fraction", it.invalid_fraction},
                                 {"basis_hash", it.basis_hash},
                                 {"recovered_count", it.recovered_count},
                                 {"carried_over_count", it.carried_over_count},
                                 {"uniform_fallbacks", it.uniform_fallbacks}});
    s["samples"] = nlohmann::json::array();
    for (const auto& set : space.samples) {
      nlohmann::json counts = nlohmann::json::object();
      for (const auto& [bits, count] : set.counts)
        counts[string_bits(bits, set.n_qubits)] = count;
      s["samples"].push_back({{"time_index", set.provenance.time_index},
                              {"realization", set.provenance.realization},
                              {"seed", set.provenance.seed},
                              {"total_shots", set.total_shots},
                              {"counts", counts}});
    }
    j["spaces"].push_back(std::move(s));
  }
  j["final_energy"] = result.final_energy;
  j["final_correlation_energy"] = result.final_correlation_energy;
  if (!result.error.empty()) j["error"] = result.error;
  j["timings"] = result.wall_times;
  return j;
}

namespace detail {

// RNG stream tags; every (space, stage, time, realization, iteration) tuple
// owns a disjoint stream so parallel and serial executions sample identically.
enum RngStream : std::uint64_t {
  kStreamSequence = 1,
  kStreamShots = 2,
  kStreamNoise = 3,
  kStreamRecovery = 4,
};

inline SampleSet inject_bit_flip_noise(const SampleSet& samples, double probability, Rng rng) {
  SampleSet out;
  out.n_qubits = samples.n_qubits;
  out.total_shots = samples.total_shots;
  out.provenance = samples.provenance;
  for (const auto& [bits, count] : samples.counts)
    for (std::uint64_t copy = 0; copy < count; ++copy) {
      std::uint64_t noisy = bits;
      for (int q = 0; q < samples.n_qubits; ++q)
        if (rng.next_double() < probability) noisy ^= 1ull << q;
      ++out.counts[noisy];
    }
  return out;
}

struct StageTimer {
  std::map<std::string, double>& sink;
  std::string stage;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  StageTimer(std::map<std::string, double>& sink, std::string stage)
      : sink(sink), stage(std::move(stage)) {}
  ~StageTimer() {
    sink[stage] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <typename Fn>
auto run_stage(const std::string& stage, int iteration, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::ostringstream os;
    os << "[stage " << stage;
    if (iteration >= 0) os << ", iteration " << iteration;
    os << "] " << e.what();
    throw Error(e.error_class(), os.str());
  }
}

inline SpaceRecord run_single_space(const MolecularHamiltonian& ham, const RunConfig& cfg,
                                    const std::string& label, Rng space_rng,
                                    std::map<std::string, double>& wall_times,
                                    RunResult::Metadata& metadata) {
  SpaceRecord record;
  record.label = label;
  record.n_active_orbitals = ham.n_orbitals();
  record.n_electrons = ham.n_electrons();
  record.n_qubits = 2 * ham.n_orbitals();

  const int n_alpha = ham.n_alpha();
  const int n_beta = ham.n_beta();
  const Determinant reference =
      hartree_fock_determinant(ham.n_orbitals(), n_alpha, n_beta);
  record.hf_energy = hf_energy(ham, reference);

  PauliHamiltonian mapped;
  {
    StageTimer timer(wall_times, "mapping");
    mapped = run_stage("mapping", -1, [&] {
      return jordan_wigner(ham, SpinOrbitalOrdering::blocked, cfg.truncation_threshold);
    });
  }
  record.lambda = lambda_norm(mapped);
  const double dt = cfg.dt > 0.0 ? cfg.dt : (record.lambda > 0.0 ? 1.0 / record.lambda : 1.0);
  record.dt = dt;
  const auto time_grid = krylov_time_grid(dt, cfg.krylov_depth);
  metadata.lambda = record.lambda;
  metadata.time_grid = time_grid;

  // ---- sampling stage: (time x realization) grid, slot-ordered merge ----
  {
    StageTimer timer(wall_times, "sampling");
    run_stage("sampling", -1, [&]() -> int {
      if (cfg.shots == 0) return 0;
      const int n_times = static_cast<int>(time_grid.size());
      const int n_jobs = n_times * cfg.realizations;
      record.samples.resize(n_jobs);
      const bool exact_mode = cfg.method == "skqd-exact";

      if (exact_mode) {
        for (int i = 0; i < n_times; ++i) {
          StateVector psi = prepare_determinant(reference, record.n_qubits);
          exact_evolve(psi, mapped, time_grid[i]);
          for (int r = 0; r < cfg.realizations; ++r) {
            auto set = sample_bitstrings(
                psi, cfg.shots,
                space_rng.derive({kStreamShots, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(r)}));
            set.provenance.time_index = i;
            set.provenance.realization = r;
            record.samples[i * cfg.realizations + r] = std::move(set);
          }
        }
      } else {
#pragma omp parallel for schedule(dynamic)
        for (int job = 0; job < n_jobs; ++job) {
          const int i = job / cfg.realizations;
          const int r = job % cfg.realizations;
          StateVector psi = prepare_determinant(reference, record.n_qubits);
          const std::uint64_t budget = time_grid[i] == 0.0 ? 0 : cfg.qdrift_samples;
          const auto seq = sample_sequence(
              mapped, time_grid[i], record.lambda > 0.0 ? budget : 0,
              space_rng.derive({kStreamSequence, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(r)}));
          evolve(psi, seq);
          auto set = sample_bitstrings(
              psi, cfg.shots,
              space_rng.derive({kStreamShots, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(r)}));
          set.provenance.time_index = i;
          set.provenance.realization = r;
          record.samples[job] = std::move(set);
        }
      }
      if (cfg.noise_probability > 0.0) {
        for (int job = 0; job < n_jobs; ++job)
          record.samples[job] = inject_bit_flip_noise(
              record.samples[job], cfg.noise_probability,
              space_rng.derive({kStreamNoise, static_cast<std::uint64_t>(job)}));
      }
      return 0;
    });
  }

  // ---- split once; the raw samples never change across iterations ----
  std::map<Determinant, std::uint64_t> valid_counts;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> invalid;
  std::uint64_t total_copies = 0, invalid_copies = 0;
  {
    StageTimer timer(wall_times, "recovery");
    for (const auto& set : record.samples) {
      const auto split =
          run_stage("split", -1, [&] { return split_and_filter(set, n_alpha, n_beta); });
      for (const auto& [d, w] : split.valid) valid_counts[d] += w;
      for (const auto& [bits, count] : split.invalid) {
        invalid.push_back({bits, count});
        invalid_copies += count;
      }
      total_copies += set.total_shots;
    }
  }
  const double invalid_fraction =
      total_copies == 0 ? 0.0 : static_cast<double>(invalid_copies) / total_copies;

  // ---- self-consistent recovery loop ----
  OccupancyProfile profile = initial_occupancy_profile(reference, ham.n_orbitals());
  std::vector<std::pair<Determinant, double>> previous_amplitudes;
  double previous_energy = 0.0;

  const ExcitationLevel level = cfg.excitation_level == "singles"
                                    ? ExcitationLevel::singles
                                    : ExcitationLevel::singles_doubles;
  const int n_iterations = std::max(cfg.recovery_iterations, 1);
  SubspaceResult last_solution;

  for (int iteration = 0; iteration < n_iterations; ++iteration) {
    IterationRecord iter;
    iter.iteration = iteration;
    iter.invalid_fraction = invalid_fraction;

    // Recover invalid bitstrings with the current occupancy profile.
    RecoveryResult recovery;
    {
      StageTimer timer(wall_times, "recovery");
      recovery = run_stage("recovery", iteration, [&] {
        return recover_configurations(
            invalid, n_alpha, n_beta, profile,
            space_rng.derive({kStreamRecovery, static_cast<std::uint64_t>(iteration)}));
      });
    }
    iter.uniform_fallbacks = recovery.uniform_fallbacks;
    for (const auto& [d, w] : recovery.recovered) iter.recovered_count += w;

    // Merge valid + recovered (+ reference seed) into the fresh determinant set.
    std::vector<std::pair<Determinant, std::uint64_t>> fresh(valid_counts.begin(),
                                                             valid_counts.end());
    fresh.insert(fresh.end(), recovery.recovered.begin(), recovery.recovered.end());
    if (cfg.seed_reference) fresh.push_back({reference, 1});

    const std::size_t keep = iteration == 0 ? 0 : cfg.carry_over_keep;
    iter.carried_over_count = std::min(keep, previous_amplitudes.size());
    std::vector<Determinant> dets;
    {
      StageTimer timer(wall_times, "recovery");
      dets = carry_over(previous_amplitudes, fresh, keep);
    }

    // Importance map: shot counts, with carried determinants re-entering on
    // the same scale via |amplitude| * total sample weight.
    std::unordered_map<Determinant, double, DeterminantHash> weights;
    double total_weight = 0.0;
    for (const auto& [d, w] : fresh) {
      weights[d] += static_cast<double>(w);
      total_weight += static_cast<double>(w);
    }
    if (keep > 0)
      for (std::size_t i = 0; i < keep && i < previous_amplitudes.size(); ++i) {
        const auto& [d, amp] = previous_amplitudes[i];
        weights[d] = std::max(weights[d], std::abs(amp) * std::max(total_weight, 1.0));
      }

    // Build the (capped) product basis.
    SubspaceBasis basis = SubspaceBasis::explicit_list(ham.n_orbitals(), {});
    {
      StageTimer timer(wall_times, "build");
      basis = run_stage("build", iteration, [&] {
        if (cfg.subspace_cap > 0) {
          ExtensionConfig cap_cfg;
          cap_cfg.cap = cfg.subspace_cap;
          cap_cfg.mode = SubspaceBasis::Mode::product;
          return rank_and_cap(dets, weights, cap_cfg, ham.n_orbitals());
        }
        return SubspaceBasis::product_from_determinants(ham.n_orbitals(), dets);
      });
    }

    SubspaceResult solution;
    {
      StageTimer timer(wall_times, "diagonalize");
      solution = run_stage("diagonalize", iteration, [&] {
        return solve_subspace(ham, basis, cfg.eigenpairs, cfg.solver_tol);
      });
    }

    // ExtSqDRIFT: enlarge with singles/doubles of the sampled determinants,
    // rank (perturbatively for unseen ones), cap, diagonalize once more.
    if (cfg.method == "extsqdrift") {
      StageTimer timer(wall_times, "extension");
      solution = run_stage("extension", iteration, [&] {
        std::vector<Determinant> sources = dets;
        auto enlarged = generate_excitations(sources, ham.n_orbitals(), level);

        // Reference wavefunction for scoring: the pre-extension solution,
        // truncated to its dominant amplitudes to bound the scoring cost.
        std::vector<std::pair<Determinant, double>> ranked;
        for (std::size_t i = 0; i < basis.size(); ++i)
          ranked.push_back({basis.determinant(i),
                            solution.eigenvectors(static_cast<Eigen::Index>(i), 0)});
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
          const double wa = std::abs(a.second), wb = std::abs(b.second);
          if (wa != wb) return wa > wb;
          return a.first < b.first;
        });
        if (ranked.size() > 500) ranked.resize(500);
        std::vector<Determinant> ref_dets;
        std::vector<double> ref_coeffs;
        for (const auto& [d, c] : ranked) {
          ref_dets.push_back(d);
          ref_coeffs.push_back(c);
        }
        const PerturbativeScorer scorer(ham, ref_dets, ref_coeffs, solution.ground_energy());

        ExtensionConfig ext_cfg;
        ext_cfg.level = level;
        ext_cfg.mode = SubspaceBasis::Mode::explicit_list;
        // Dimension parity with the product cap: d strings per spin = d^2
        // determinants.
        ext_cfg.cap = cfg.extend_uncapped || cfg.subspace_cap == 0
                          ? enlarged.size()
                          : cfg.subspace_cap * cfg.subspace_cap;
        ext_cfg.cap = std::max<std::size_t>(ext_cfg.cap, 1);
        const auto extended_basis =
            rank_and_cap(enlarged, weights, ext_cfg, ham.n_orbitals(), &scorer);
        return solve_subspace(ham, extended_basis, cfg.eigenpairs, cfg.solver_tol);
      });
      basis = solution.basis;
    }

    iter.energy = solution.ground_energy();
    iter.correlation_energy = correlation_energy(iter.energy, record.hf_energy);
    iter.subspace_dimension = solution.basis.size();
    iter.basis_hash = hash_hex(solution.basis.content_hash());
    record.iterations.push_back(iter);
    last_solution = solution;

    // Self-consistency update.
    previous_amplitudes.clear();
    std::vector<Determinant> basis_dets;
    std::vector<double> basis_coeffs;
    basis_dets.reserve(solution.basis.size());
    for (std::size_t i = 0; i < solution.basis.size(); ++i) {
      const double c = solution.eigenvectors(static_cast<Eigen::Index>(i), 0);
      previous_amplitudes.push_back({solution.basis.determinant(i), c});
      basis_dets.push_back(solution.basis.determinant(i));
      basis_coeffs.push_back(c);
    }
    profile = run_stage("occupancy", iteration, [&] {
      return estimate_occupancies(basis_dets, basis_coeffs, ham.n_orbitals());
    });

    const bool converged =
        iteration > 0 && std::abs(iter.energy - previous_energy) < cfg.convergence_threshold;
    previous_energy = iter.energy;
    if (converged) {
      record.converged = true;
      break;
    }
  }

  record.final_energy = record.iterations.back().energy;
  record.final_correlation_energy = record.iterations.back().correlation_energy;

  if (cfg.export_basis) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    std::ofstream basis_out(fs::path(cfg.output_dir) / ("basis_" + label + ".txt"));
    std::ofstream vec_out(fs::path(cfg.output_dir) / ("eigenvector_" + label + ".csv"));
    if (!basis_out || !vec_out)
      throw IoError("cannot write basis export under " + cfg.output_dir);
    write_basis(basis_out, last_solution.basis);
    write_eigenvector_csv(vec_out, last_solution.basis, last_solution.eigenvectors.col(0));
  }
  return record;
}

}  // namespace detail

/// result.json + convergence.csv + plotdata.csv under `dir`.
inline void emit_report(const RunResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);

  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw IoError("cannot write " + (fs::path(dir) / name).string());
    return out;
  };

  {
    auto out = open("result.json");
    out << result_to_json(result).dump(2) << "\n";
  }
  {
    auto out = open("convergence.csv");
    char buf[64];
    out << "iteration,energy,correlation_energy,dimension\n";
    for (const auto& space : result.spaces)
      for (const auto& it : space.iterations) {
        out << it.iteration << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", it.energy);
        out << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.17g", it.correlation_energy);
        out << buf << "," << it.subspace_dimension << "\n";
      }
  }
  {
    auto out = open("plotdata.csv");
    char buf[64];
    out << "size,method,energy,correlation_energy\n";
    const std::string method = result.config_echo.value("method", "sqdrift");
    for (const auto& space : result.spaces) {
      out << space.n_qubits << "," << method << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", space.final_energy);
      out << buf << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", space.final_correlation_energy);
      out << buf << "\n";
    }
  }
}

/// End-to-end run: parse, map, sample, recover, project, diagonalize. With
/// active_spaces configured, each space runs the full pipeline and
/// contributes one plotdata row.
inline RunResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  RunResult result;
  result.config_echo = config_to_json(cfg);
  result.metadata.master_seed = cfg.seed;
  result.metadata.qdrift_samples = cfg.qdrift_samples;
  result.metadata.truncation_threshold = cfg.truncation_threshold;

  try {
    MolecularHamiltonian full;
    {
      detail::StageTimer timer(result.wall_times, "parse");
      full = detail::run_stage("parse", -1, [&] { return parse_fcidump_file(cfg.input); });
    }

    std::vector<std::pair<std::string, MolecularHamiltonian>> spaces;
    if (cfg.active_spaces.empty()) {
      spaces.push_back({"full", full});
    } else {
      for (const auto& spec : cfg.active_spaces) {
        std::ostringstream label;
        label << spec.active.size() << "o" << (full.n_electrons() - 2 * spec.frozen.size())
              << "e";
        spaces.push_back({label.str(), restrict_active_space(full, spec.frozen, spec.active)});
      }
    }

    Rng root(cfg.seed);
    for (std::size_t s = 0; s < spaces.size(); ++s) {
      result.spaces.push_back(detail::run_single_space(spaces[s].second, cfg, spaces[s].first,
                                                       root.derive({s}), result.wall_times,
                                                       result.metadata));
    }
    result.final_energy = result.spaces.back().final_energy;
    result.final_correlation_energy = result.spaces.back().final_correlation_energy;
  } catch (const Error& e) {
    result.error = e.what();
    try {
      emit_report(result, cfg.output_dir);
    } catch (...) {
      // Partial-result emission is best effort; the original error wins.
    }
    throw;
  }
  return result;
}

}  // namespace sqdrift
