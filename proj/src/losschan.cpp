#include "mpsmetro/losschan.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mpsmetro/errors.hpp"

namespace mpsmetro {

namespace {

// k * ln(x) with the 0^0 = 1 convention.
double log_power(double x, int k) {
  if (k == 0) return 0.0;
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return k * std::log(x);
}

double log_loss_weight(int n, int l, double eta) {
  return log_binomial(n, l) + log_power(eta, n - l) + log_power(1.0 - eta, l);
}

void check_counts(int n, int n_probes, int l0, int l1) {
  if (n_probes < 0 || n < 0 || n > n_probes || l0 < 0 || l1 < 0)
    throw DomainError("loss branch: invalid indices n=" + std::to_string(n) + " N=" + std::to_string(n_probes) +
                      " l0=" + std::to_string(l0) + " l1=" + std::to_string(l1));
}

void check_branch(int n_probes, int l0, int l1) {
  if (l0 < 0 || l1 < 0 || l0 + l1 > n_probes)
    throw DomainError("loss branch: need l0, l1 >= 0 and l0 + l1 <= N");
}

}  // namespace

LossChannel LossChannel::checked(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1], got " + std::to_string(eta));
  return {eta};
}

double LossBranch::q(int n) const {
  if (n < first_n() || n > last_n()) return 0.0;
  return conditional_weights[static_cast<std::size_t>(n - l0)];
}

LossTable::LossTable(int n_probes, double eta) : n_(n_probes), eta_(LossChannel::checked(eta).eta) {
  if (n_probes < 0) throw DomainError("LossTable: negative N");
  const auto dim = static_cast<std::size_t>(n_) + 1;
  table_.assign(dim * dim, 0.0);
  for (int l = 0; l <= n_; ++l)
    for (int n = l; n <= n_; ++n) table_[idx(l, n)] = std::exp(log_loss_weight(n, l, eta_));
}

double survival_weight(int n, int n_probes, int l0, int l1, double eta) {
  LossChannel::checked(eta);
  check_counts(n, n_probes, l0, l1);
  if (l0 > n || l1 > n_probes - n) return 0.0;
  return std::exp(0.5 * (log_loss_weight(n, l0, eta) + log_loss_weight(n_probes - n, l1, eta)));
}

double branch_probability(const SymmetricState& state, int l0, int l1, double eta) {
  const int big_n = state.n_probes();
  LossChannel::checked(eta);
  check_branch(big_n, l0, l1);
  double p = 0.0;
  for (int n = l0; n <= big_n - l1; ++n) {
    const double beta = survival_weight(n, big_n, l0, l1, eta);
    p += std::norm(state[n]) * beta * beta;
  }
  return p;
}

LossBranch conditional_distribution(const SymmetricState& state, int l0, int l1, double eta) {
  const int big_n = state.n_probes();
  LossChannel::checked(eta);
  check_branch(big_n, l0, l1);
  LossBranch br{l0, l1, 0.0, {}};
  br.conditional_weights.reserve(static_cast<std::size_t>(big_n - l1 - l0 + 1));
  for (int n = l0; n <= big_n - l1; ++n) {
    const double beta = survival_weight(n, big_n, l0, l1, eta);
    br.conditional_weights.push_back(std::norm(state[n]) * beta * beta);
  }
  for (double w : br.conditional_weights) br.probability += w;
  if (!(br.probability > 0.0))
    throw EmptyBranchError("conditional_distribution: branch (" + std::to_string(l0) + "," + std::to_string(l1) +
                           ") has zero probability");
  for (double& w : br.conditional_weights) w /= br.probability;
  return br;
}

std::vector<std::vector<double>> all_branch_probabilities(const SymmetricState& state, double eta) {
  const int big_n = state.n_probes();
  const LossTable table(big_n, eta);
  const auto pops = state.populations();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(big_n) + 1);
  for (int l0 = 0; l0 <= big_n; ++l0) {
    auto& row = out[static_cast<std::size_t>(l0)];
    row.assign(static_cast<std::size_t>(big_n - l0) + 1, 0.0);
    for (int l1 = 0; l1 <= big_n - l0; ++l1) {
      double p = 0.0;
      for (int n = l0; n <= big_n - l1; ++n) p += pops[static_cast<std::size_t>(n)] * table.beta_squared(n, l0, l1);
      row[static_cast<std::size_t>(l1)] = p;
    }
  }
  return out;
}

}  // namespace mpsmetro
