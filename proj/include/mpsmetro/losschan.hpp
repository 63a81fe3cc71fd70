#pragma once

#include <span>
#include <vector>

#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

// Independent per-probe loss with transmissivity eta in [0, 1].
struct LossChannel {
  double eta = 1.0;

  // DomainError unless 0 <= eta <= 1.
  static LossChannel checked(double eta);
};

// One loss pattern: l0 probes lost from |0>, l1 from |1>. The conditional
// weights q(n) are indexed by the ORIGINAL excitation number n, which runs
// over first_n() .. last_n() = l0 .. N - l1.
struct LossBranch {
  int l0 = 0;
  int l1 = 0;
  double probability = 0.0;
  std::vector<double> conditional_weights;

  int first_n() const { return l0; }
  int last_n() const { return l0 + static_cast<int>(conditional_weights.size()) - 1; }
  double q(int n) const;
};

// Binomial loss weights B^n_l = C(n, l) eta^(n-l) (1-eta)^l for 0 <= l <= n <= N,
// evaluated once in log domain. Row-major by l so that loops over n are
// contiguous.
class LossTable {
 public:
  LossTable(int n_probes, double eta);

  int n_probes() const { return n_; }
  double eta() const { return eta_; }
  // B^n_l; zero when l > n.
  double weight(int n, int l) const { return table_[idx(l, n)]; }
  // Contiguous row B^0_l .. B^N_l.
  std::span<const double> row(int l) const { return {table_.data() + idx(l, 0), static_cast<std::size_t>(n_) + 1}; }
  // Squared survival amplitude (beta^n_{l0 l1})^2 = B^n_{l0} B^{N-n}_{l1}.
  double beta_squared(int n, int l0, int l1) const { return weight(n, l0) * weight(n_ - n, l1); }

 private:
  std::size_t idx(int l, int n) const {
    return static_cast<std::size_t>(l) * (static_cast<std::size_t>(n_) + 1) + static_cast<std::size_t>(n);
  }

  int n_;
  double eta_;
  std::vector<double> table_;
};

// beta^n_{l0 l1}(eta) = sqrt(B^n_{l0} B^{N-n}_{l1}); zero if l0 > n or l1 > N - n.
double survival_weight(int n, int n_probes, int l0, int l1, double eta);

// p_{l0 l1} = sum_n |alpha_n|^2 (beta^n_{l0 l1})^2.
double branch_probability(const SymmetricState& state, int l0, int l1, double eta);

// Normalized post-loss excitation distribution of one branch. EmptyBranchError
// if the branch has zero probability.
LossBranch conditional_distribution(const SymmetricState& state, int l0, int l1, double eta);

// Probabilities of every branch as a triangular table indexed [l0][l1],
// l1 = 0..N-l0.
std::vector<std::vector<double>> all_branch_probabilities(const SymmetricState& state, double eta);

}  // namespace mpsmetro
