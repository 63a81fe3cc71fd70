#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpsmetro/mps.hpp"
#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

enum class ObjectiveKind { approx_qfi_max, ramsey_min };

// Phase convention imposed on the searched amplitudes.
//   real_nonneg   alpha_n >= 0 (QFI is blind to amplitude phases)
//   i_power_real  alpha_n = i^n r_n with real r_n
//   full_complex  unrestricted
enum class Gauge { real_nonneg, i_power_real, full_complex };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::approx_qfi_max;
  double eta = 1.0;
  Gauge gauge = Gauge::real_nonneg;

  static ObjectiveSpec qfi(double eta) { return {ObjectiveKind::approx_qfi_max, eta, Gauge::real_nonneg}; }
  static ObjectiveSpec ramsey(double eta, Gauge gauge = Gauge::i_power_real) {
    return {ObjectiveKind::ramsey_min, eta, gauge};
  }

  // DomainError on eta outside [0, 1] (or (0, 1] for ramsey_min) and on a
  // QFI objective with any gauge other than real_nonneg.
  void validate() const;
};

struct OptimizerOptions {
  int starts = 16;
  int max_iters = 20000;
  double rel_tol = 1e-10;
  std::uint64_t seed = 0;
  double init_spread = 1.0;
  // Threads used for independent starts. Results do not depend on it.
  int workers = 1;
  bool record_trajectories = false;
  // Extra starting points in the search gauge (see OptimizationResult::raw_mps),
  // e.g. a lower-D optimum. Each must have the requested N and bond
  // dimension <= D; missing pairs are padded with (0, 0).
  std::vector<DiagonalMPS> warm_starts;
  // Direct (Dicke amplitude) optimization refuses larger N.
  int direct_max_probes = 150;

  void validate() const;
};

struct StartReport {
  int index = 0;
  double value = 0.0;  // figure of merit reached (F~ or delta phi)
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::vector<double> trajectory;
};

struct OptimizationResult {
  std::optional<DiagonalMPS> mps;  // set for MPS optimization, canonical form
  // Best point as searched (before canonical_form); valid as a warm start.
  std::optional<DiagonalMPS> raw_mps;
  SymmetricState state;
  // F~ for approx_qfi_max, delta phi for ramsey_min.
  double objective_value = 0.0;
  double delta_phi = 0.0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<StartReport> starts;
};

class OptimizationFailed : public std::runtime_error {
 public:
  OptimizationFailed(const std::string& what, std::vector<StartReport> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<StartReport>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<StartReport> diagnostics_;
};

// Figure of merit of a state: F~ (to be maximized) or Ramsey delta phi (to be
// minimized).
double figure_of_merit(const SymmetricState& state, const ObjectiveSpec& objective);
// Delta phi implied by a figure of merit value.
double delta_phi_from_merit(double merit, ObjectiveKind kind);
// True if merit a is strictly better than b.
bool better(double a, double b, ObjectiveKind kind);

// Multi-start Nelder-Mead over the diagonals of a bond-dimension-D symmetric
// MPS. Start 0 uses equal diagonals, start 1 the N00N-like extremes, then the
// warm starts, then opts.starts seeded random draws.
OptimizationResult optimize_mps(int n_probes, int bond_dim, const ObjectiveSpec& objective,
                                const OptimizerOptions& opts);

// Brute-force reference over all N+1 Dicke amplitudes. F~ is concave in the
// populations, so the QFI problem is solved by spectral projected gradient on
// the probability simplex with a duality-gap stopping rule. The Ramsey problem
// in the i^n gauge reduces to ground states of Q + c - lambda Y scanned over
// lambda. CapabilityError above opts.direct_max_probes.
OptimizationResult optimize_direct(int n_probes, const ObjectiveSpec& objective, const OptimizerOptions& opts);

// optimize_mps for D = 1..max_bond_dim, each D warm-started from the
// previous optimum padded with a zero pair.
std::vector<OptimizationResult> optimize_mps_ladder(int n_probes, int max_bond_dim, const ObjectiveSpec& objective,
                                                    const OptimizerOptions& opts);

struct BondDimensionReport {
  std::optional<int> minimal_bond_dim;  // empty when the cap was hit
  double direct_delta_phi = 0.0;
  std::vector<double> mps_delta_phi;  // index D-1
  bool cap_exceeded = false;
};

// Smallest D with (dphi_mps(D) - dphi_direct) / dphi_direct <= threshold,
// trying D = 1, 2, ... up to d_cap.
BondDimensionReport minimal_bond_dimension(int n_probes, const ObjectiveSpec& objective, double threshold,
                                           const OptimizerOptions& opts, int d_cap = 12);

}  // namespace mpsmetro
