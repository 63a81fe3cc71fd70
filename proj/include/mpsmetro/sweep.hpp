#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpsmetro/mps.hpp"
#include "mpsmetro/optimize.hpp"

namespace mpsmetro {

enum class OutputFormat { csv, json };

struct SweepSpec {
  std::vector<int> n_list;
  std::vector<int> d_list;
  std::vector<double> eta_list;
  std::vector<ObjectiveKind> objectives;
  // Also run the direct optimizer once per (N, eta, objective); emitted as D = 0.
  bool include_direct = true;
  Gauge ramsey_gauge = Gauge::i_power_real;
  OptimizerOptions optimizer;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  // Write 0 instead of the measured wall time, for byte-comparable output.
  bool record_timing = true;

  // DomainError on empty lists, N < 1, D < 1 or eta outside (0, 1].
  void validate() const;
};

enum class RecordStatus { ok, capability_skipped };

struct SweepRecord {
  int n = 0;
  int d = 0;  // 0 = direct optimization
  double eta = 1.0;
  ObjectiveKind objective = ObjectiveKind::approx_qfi_max;
  double objective_value = 0.0;
  double delta_phi = 0.0;
  double shot_noise_bound = 0.0;  // 1 / sqrt(eta N)
  double asymptotic_bound = 0.0;  // sqrt((1 - eta) / (eta N))
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  RecordStatus status = RecordStatus::ok;
  std::optional<DiagonalMPS> mps;
};

// Seed used for one (N, eta, objective, D) point of a sweep.
std::uint64_t point_seed(std::uint64_t global_seed, int n, double eta, ObjectiveKind kind, int d);

// Runs every point on `workers` threads (work unit: one (N, eta, objective)
// group, whose D values are optimized in ascending order, each warm-started
// from the previous optimum). Records come back sorted by N, D, eta,
// objective, independent of the worker count.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers);

inline constexpr const char* kCsvHeader =
    "N,D,eta,objective,objective_value,delta_phi,shot_noise_bound,asymptotic_bound,converged,iterations,seed,"
    "wall_time_s";

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);
void write_json(std::ostream& os, const std::vector<SweepRecord>& records);
// One MPS text record per MPS row, each preceded by a "# N=.. D=.. eta=.. objective=.." line.
void write_states(std::ostream& os, const std::vector<SweepRecord>& records);

// Writes the records to spec.output_path in spec.format (plus
// "<path>.states.txt" when dump_states is set). std::runtime_error if the
// path cannot be opened.
void write_records(const SweepSpec& spec, const std::vector<SweepRecord>& records, bool dump_states);

// Flat "key = value" config with comma-separated lists; '#' starts a comment.
// Keys: n, d, eta, objective, direct, gauge, starts, max_iters, tol, seed,
// init_spread, out, format, timing.
SweepSpec parse_sweep_config(const std::string& text);
std::string serialize_sweep_config(const SweepSpec& spec);

std::string to_string(ObjectiveKind kind);  // "qfi" / "ramsey"
ObjectiveKind parse_objective(const std::string& s);
std::string to_string(Gauge gauge);  // "real_nonneg" / "i_power_real" / "full_complex"
Gauge parse_gauge(const std::string& s);

}  // namespace mpsmetro
