#pragma once

#include <span>
#include <vector>

#include "mpsmetro/losschan.hpp"
#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

enum class QfiKind { pure, approximate, exact };

// Fisher information in units of 1/phase^2 together with how it was obtained.
struct QfiValue {
  double value = 0.0;
  QfiKind kind = QfiKind::pure;
};

// 4 Var(n) of a pure symmetric state.
double pure_qfi(const SymmetricState& state);

struct ApproxQfiOptions {
  // Branches whose probability provably lies below this bound are skipped.
  // The default of 0 keeps the sum exact.
  double branch_cutoff = 0.0;
};

// Loss-branch weighted sum of pure-state QFIs:
//   F~ = sum_{l0,l1} p_{l0 l1} 4 Var_{q_{l0 l1}}(n).
// Independent of the phase and of the phases of the amplitudes.
double approx_qfi(const SymmetricState& state, double eta, ApproxQfiOptions opts = {});

// Same sum driven directly by the populations |alpha_n|^2 (which must sum to
// one) and a prebuilt loss table of matching N. Used by the optimizers.
double approx_qfi(std::span<const double> populations, const LossTable& table, ApproxQfiOptions opts = {});

// Evaluates F~ and its gradient with respect to the populations:
//   dF~/dx_m = 4 sum_b B^m_{l0} B^{N-m}_{l1} (m - mu_b)^2
// where mu_b is the conditional mean excitation of branch b. The populations
// need not be normalized; the value is that of the (homogeneous) formula.
double approx_qfi_with_gradient(std::span<const double> populations, const LossTable& table,
                                std::span<double> gradient);

struct ExactQfiOptions {
  int max_probes = 30;
  // Eigenvalue pairs with lambda_j + lambda_k below this fraction of the
  // trace are dropped from the SLD sum.
  double eigen_cutoff = 1e-12;
};

// Mixed-state QFI of the lossy output computed from the symmetric logarithmic
// derivative, sector by sector in the number of surviving probes.
// CapabilityError if N exceeds opts.max_probes.
double exact_qfi(const SymmetricState& state, double eta, ExactQfiOptions opts = {});

QfiValue evaluate_qfi(const SymmetricState& state, double eta, QfiKind kind);

// Cramer-Rao precision 1 / sqrt(k F). UndefinedPrecisionError if F <= 0 or
// k < 1.
double precision_from_qfi(double fisher, int repetitions = 1);

}  // namespace mpsmetro
