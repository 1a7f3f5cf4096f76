// Copyright 2026 The sqdrift Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oracle/dense_fermion.hpp"
#include "sqdrift/exact_evolution.hpp"
#include "sqdrift/extension.hpp"
#include "sqdrift/fcidump.hpp"
#include "sqdrift/jordan_wigner.hpp"
#include "sqdrift/pipeline.hpp"
#include "sqdrift/qdrift.hpp"
#include "sqdrift/recovery.hpp"
#include "sqdrift/subspace.hpp"

using namespace sqdrift;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
  return std::string(SQDRIFT_FIXTURE_DIR) + "/" + name;
}

int g_failures = 0;

void run_criterion(int id, const std::string& name, double budget_seconds,
                   const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && seconds > budget_seconds) {
    pass = false;
    detail += " [runtime budget exceeded]";
  }
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %d: %-28s (%6.1f s)  %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              seconds, detail.c_str());
  std::fflush(stdout);
}

struct Check {
  std::ostringstream detail;
  bool ok = true;
  void require(bool condition, const std::string& message) {
    if (!condition) {
      ok = false;
      detail << " FAILED{" << message << "}";
    }
  }
  std::string finish() {
    if (!ok) throw std::runtime_error(detail.str());
    return detail.str();
  }
};

std::string format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

std::string criterion_mapping_correctness() {
  Check check;
  for (const char* name : {"h2_sto3g.fcidump", "h4_sto3g.fcidump"}) {
    const auto ham = parse_fcidump_file(fixture(name));
    const auto mapped = jordan_wigner(ham);
    const auto dense = oracle::dense_from_terms(mapped);
    const auto reference = oracle::dense_hamiltonian(ham);
    const double deviation = (dense - reference).cwiseAbs().maxCoeff();
    check.detail << name << " max|dH|=" << format(deviation) << "  ";
    check.require(deviation < 1e-9, std::string(name) + " exceeds 1e-9");
  }
  return check.finish();
}

std::string criterion_oracle_convergence() {
  Check check;
  struct Case {
    const char* name;
    const char* method;
    double tolerance;
  };
  const Case cases[] = {{"h2_sto3g", "sqdrift", 1e-6},
                        {"h4_sto3g", "sqdrift", 1.6e-3},
                        {"h2_sto3g", "skqd-exact", 1e-6},
                        {"h4_sto3g", "skqd-exact", 1e-6}};
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.input = fixture(std::string(c.name) + ".fcidump");
    cfg.method = c.method;
    cfg.seed = 20260810;
    cfg.subspace_cap = 0;  // full cap
    const auto result = run_pipeline(cfg);
    const double e_fci = fci_oracle(parse_fcidump_file(cfg.input)).ground_energy();
    const double error = std::abs(result.final_energy - e_fci);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.detail << c.name << "/" << c.method << " |dE|=" << format(error) << "  ";
    check.require(error <= c.tolerance,
                  std::string(c.name) + "/" + c.method + " misses tolerance " +
                      format(c.tolerance));
    check.require(seconds < 120.0, std::string(c.name) + "/" + c.method + " over 2 min");
  }
  return check.finish();
}

std::string criterion_channel_law() {
  Check check;
  const auto ham = parse_fcidump_file(fixture("h2_sto3g.fcidump"));
  const auto mapped = jordan_wigner(ham);
  const auto rho = DensityEstimate::pure(prepare_determinant(hartree_fock_determinant(2, 1, 1), 4));
  const double t = 2.0 / lambda_norm(mapped);
  const int realizations = 10000;

  const double err_500 = estimate_channel_error(mapped, rho, t, 500, realizations, Rng(11));
  const double err_2000 = estimate_channel_error(mapped, rho, t, 2000, realizations, Rng(12));
  const double n_ratio = err_500 / err_2000;
  check.detail << "err(N=500)=" << format(err_500) << " err(N=2000)=" << format(err_2000)
               << " ratio=" << format(n_ratio) << "  ";
  check.require(n_ratio >= 2.5 && n_ratio <= 6.0, "1/N reduction factor outside [2.5, 6]");

  const double err_t = estimate_channel_error(mapped, rho, t, 500, realizations, Rng(13));
  const double err_half = estimate_channel_error(mapped, rho, t / 2, 500, realizations, Rng(14));
  const double t_ratio = err_t / err_half;
  check.detail << "err(t)=" << format(err_t) << " err(t/2)=" << format(err_half)
               << " ratio=" << format(t_ratio);
  check.require(t_ratio >= 3.0 && t_ratio <= 5.0, "t^2 reduction factor outside [3, 5]");
  return check.finish();
}

std::string criterion_variational_invariants() {
  Check check;
  const auto ham = parse_fcidump_file(fixture("h4_sto3g.fcidump"));
  const double e_fci = fci_oracle(ham).ground_energy();
  const auto strings = enumerate_strings(4, 2);
  Rng rng(2026);
  int violations = 0;
  for (int pair = 0; pair < 200; ++pair) {
    std::set<std::uint64_t> a1, b1;
    a1.insert(strings[rng.next_below(strings.size())]);
    b1.insert(strings[rng.next_below(strings.size())]);
    for (int add = 0; add < 2; ++add) {
      a1.insert(strings[rng.next_below(strings.size())]);
      b1.insert(strings[rng.next_below(strings.size())]);
    }
    auto a2 = a1;
    auto b2 = b1;
    for (int add = 0; add < 2; ++add) {
      a2.insert(strings[rng.next_below(strings.size())]);
      b2.insert(strings[rng.next_below(strings.size())]);
    }
    const double e1 = solve_subspace(ham, SubspaceBasis::product(4, {a1.begin(), a1.end()},
                                                                 {b1.begin(), b1.end()}))
                          .ground_energy();
    const double e2 = solve_subspace(ham, SubspaceBasis::product(4, {a2.begin(), a2.end()},
                                                                 {b2.begin(), b2.end()}))
                          .ground_energy();
    if (!(e2 <= e1 + 1e-10)) ++violations;
    if (!(e1 >= e_fci - 1e-10 && e2 >= e_fci - 1e-10)) ++violations;
  }
  check.detail << "200 nested pairs, violations=" << violations;
  check.require(violations == 0, "variational violation detected");
  return check.finish();
}

std::string criterion_extension_equivalence() {
  Check check;
  const auto ham = parse_fcidump_file(fixture("h4_sto3g.fcidump"));
  const auto hf = hartree_fock_determinant(4, 2, 2);
  const auto generated = generate_excitations({hf}, 4, ExcitationLevel::singles_doubles);

  std::set<Determinant> brute_force;
  for (auto a : enumerate_strings(4, 2))
    for (auto b : enumerate_strings(4, 2)) {
      const Determinant d{a, b};
      if (excitation_degree(d, hf) <= 2) brute_force.insert(d);
    }
  const std::set<Determinant> ours(generated.begin(), generated.end());
  check.detail << "CISD size=" << ours.size() << "  ";
  check.require(ours == brute_force, "CISD set mismatch");

  const auto singles = generate_excitations({hf}, 4, ExcitationLevel::singles);
  const double e_sd =
      solve_subspace(ham, SubspaceBasis::explicit_list(4, generated)).ground_energy();
  const double e_s =
      solve_subspace(ham, SubspaceBasis::explicit_list(4, singles)).ground_energy();
  check.detail << "E(SD)=" << format(e_sd) << " E(S)=" << format(e_s);
  check.require(e_sd <= e_s + 1e-10, "singles+doubles energy above singles-only");
  return check.finish();
}

std::string criterion_recovery_under_noise() {
  Check check;
  RunConfig cfg;
  cfg.input = fixture("h4_sto3g.fcidump");
  cfg.method = "sqdrift";
  cfg.seed = 314159;
  cfg.recovery_iterations = 3;
  cfg.carry_over_keep = 100;
  auto noisy_cfg = cfg;
  noisy_cfg.noise_probability = 0.02;
  const auto noiseless = run_pipeline(cfg);
  const auto noisy = run_pipeline(noisy_cfg);
  const double diff = std::abs(noisy.final_energy - noiseless.final_energy);
  check.detail << "E_noiseless=" << format(noiseless.final_energy)
               << " E_noisy=" << format(noisy.final_energy) << " |dE|=" << format(diff)
               << " invalid_frac=" << format(noisy.spaces[0].iterations[0].invalid_fraction);
  check.require(noisy.spaces[0].iterations[0].invalid_fraction > 0.05,
                "noise injection produced too few invalid samples to be meaningful");
  check.require(diff <= 1e-3, "recovered energy misses the noiseless energy by > 1 mHa");
  return check.finish();
}

std::string criterion_trend_analogue() {
  Check check;
  RunConfig cfg;
  cfg.input = fixture("h6_sto3g.fcidump");
  cfg.method = "sqdrift";
  cfg.seed = 60606;
  cfg.shots = 20000;
  cfg.subspace_cap = 20;  // fixed cap d across all spaces
  cfg.active_spaces = {{{0, 1}, {2, 3, 4, 5}},
                       {{0}, {1, 2, 3, 4, 5}},
                       {{}, {0, 1, 2, 3, 4, 5}}};
  const auto out_dir = (fs::temp_directory_path() / "sqdrift_acceptance_trend").string();
  cfg.output_dir = out_dir;
  const auto result = run_pipeline(cfg);
  emit_report(result, out_dir);

  std::ifstream in(fs::path(out_dir) / "plotdata.csv");
  check.require(in.good(), "plotdata.csv missing");
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> correlations;
  while (std::getline(in, line)) {
    const auto last_comma = line.rfind(',');
    correlations.push_back(std::stod(line.substr(last_comma + 1)));
  }
  check.require(correlations.size() == 3, "expected one plotdata row per active space");
  for (std::size_t i = 0; i < correlations.size(); ++i)
    check.detail << "E_corr(" << (i == 0 ? 8 : i == 1 ? 10 : 12) << "q)="
                 << format(correlations[i]) << "  ";
  for (std::size_t i = 1; i < correlations.size(); ++i)
    check.require(correlations[i] <= correlations[i - 1] + 1e-9,
                  "correlation energy increased with active-space size");
  return check.finish();
}

std::string criterion_determinism() {
  Check check;
  RunConfig cfg;
  cfg.input = fixture("h4_sto3g.fcidump");
  cfg.method = "sqdrift";
  cfg.seed = 777;
  cfg.noise_probability = 0.02;
  cfg.recovery_iterations = 3;

  const auto dir_a = (fs::temp_directory_path() / "sqdrift_acceptance_det_a").string();
  const auto dir_b = (fs::temp_directory_path() / "sqdrift_acceptance_det_b").string();
  emit_report(run_pipeline(cfg), dir_a);
  emit_report(run_pipeline(cfg), dir_b);

  auto load_without_timings = [](const std::string& dir) {
    std::ifstream in(fs::path(dir) / "result.json");
    nlohmann::json j;
    in >> j;
    j.erase("timings");
    return j.dump();
  };
  const auto a = load_without_timings(dir_a);
  const auto b = load_without_timings(dir_b);
#ifdef _OPENMP
  check.detail << "threads=" << omp_get_max_threads() << "  ";
#endif
  check.detail << "bytes=" << a.size();
  check.require(!a.empty() && a == b, "result.json differs between identical runs");
  return check.finish();
}

std::string criterion_dyson_sanity() {
  Check check;
  // Koopmans limit: single determinants differing by one alpha orbital.
  SubspaceResult rn, rm;
  rn.basis = SubspaceBasis::explicit_list(3, {Determinant{0b011, 0b001}});
  rn.eigenvectors = Eigen::MatrixXd::Ones(1, 1);
  rm.basis = SubspaceBasis::explicit_list(3, {Determinant{0b001, 0b001}});
  rm.eigenvectors = Eigen::MatrixXd::Ones(1, 1);
  const auto koopmans = dyson_orbital(rn, rm);
  check.detail << "koopmans_norm=" << format(koopmans.norm) << "  ";
  check.require(std::abs(koopmans.norm - 1.0) < 1e-12 &&
                    std::abs(std::abs(koopmans.coefficients(1)) - 1.0) < 1e-12,
                "single-determinant Dyson orbital is not the removed unit vector");

  const auto ham = parse_fcidump_file(fixture("h2_sto3g.fcidump"));
  const auto res_n = fci_oracle(ham, 1, 1);
  const auto res_m = fci_oracle(ham, 0, 1);
  const auto dyson = dyson_orbital(res_n, res_m);
  const auto [en, psi_n] = oracle::sector_ground_state(ham, 1, 1);
  const auto [em, psi_m] = oracle::sector_ground_state(ham, 0, 1);
  Eigen::VectorXd reference(2);
  for (int p = 0; p < 2; ++p) {
    const auto a_p =
        oracle::dense_annihilation(4, oracle::qubit_of(SpinOrbitalOrdering::blocked, p, 0, 2));
    reference(p) = psi_m.dot(a_p * psi_n).real();
  }
  const double direct = (dyson.coefficients - reference).cwiseAbs().maxCoeff();
  const double flipped = (dyson.coefficients + reference).cwiseAbs().maxCoeff();
  check.detail << "h2_norm=" << format(dyson.norm)
               << " max|dphi|=" << format(std::min(direct, flipped));
  check.require(std::min(direct, flipped) < 1e-9, "H2 Dyson vector deviates from dense oracle");
  check.require(dyson.norm > 0.0 && dyson.norm <= 1.0 + 1e-12, "Dyson norm outside (0, 1]");
  return check.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite (fixtures: %s)\n", SQDRIFT_FIXTURE_DIR);
  run_criterion(1, "mapping correctness", 10, criterion_mapping_correctness);
  run_criterion(2, "oracle convergence", 0, criterion_oracle_convergence);
  run_criterion(3, "qDRIFT channel law", 300, criterion_channel_law);
  run_criterion(4, "variational invariants", 60, criterion_variational_invariants);
  run_criterion(5, "ExtSqDRIFT equivalence", 30, criterion_extension_equivalence);
  run_criterion(6, "recovery under noise", 120, criterion_recovery_under_noise);
  run_criterion(7, "Fig-3 trend analogue", 300, criterion_trend_analogue);
  run_criterion(8, "determinism", 0, criterion_determinism);
  run_criterion(9, "Dyson sanity", 0, criterion_dyson_sanity);
  if (g_failures == 0)
    std::printf("all 9 acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
