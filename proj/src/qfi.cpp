#include "mpsmetro/qfi.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "mpsmetro/errors.hpp"

namespace mpsmetro {

namespace {

// Largest entry of each row of the loss table, used to bound p_{l0 l1} from
// above without touching the populations.
std::vector<double> row_maxima(const LossTable& table) {
  std::vector<double> out(static_cast<std::size_t>(table.n_probes()) + 1, 0.0);
  for (int l = 0; l <= table.n_probes(); ++l) {
    const auto r = table.row(l);
    out[static_cast<std::size_t>(l)] = *std::max_element(r.begin(), r.end());
  }
  return out;
}

struct BranchSums {
  double p = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double center = 0.0;
};

// Moments of one branch about the midpoint of its support, which keeps the
// s2 - s1^2 / p cancellation small.
inline BranchSums branch_sums(std::span<const double> pops, const LossTable& table, int l0, int l1) {
  const int big_n = table.n_probes();
  const double* r0 = table.row(l0).data();
  const double* r1 = table.row(l1).data();
  BranchSums b;
  b.center = 0.5 * (l0 + big_n - l1);
  for (int n = l0; n <= big_n - l1; ++n) {
    const double w = pops[static_cast<std::size_t>(n)] * r0[n] * r1[big_n - n];
    const double x = n - b.center;
    b.p += w;
    b.s1 += w * x;
    b.s2 += w * x * x;
  }
  return b;
}

void check_populations(std::span<const double> populations, const LossTable& table) {
  if (static_cast<int>(populations.size()) != table.n_probes() + 1)
    throw DomainError("approx_qfi: population vector length does not match loss table");
}

}  // namespace

double pure_qfi(const SymmetricState& state) { return 4.0 * excitation_moments(state).variance; }

double approx_qfi(const SymmetricState& state, double eta, ApproxQfiOptions opts) {
  const LossTable table(state.n_probes(), eta);
  const auto pops = state.populations();
  return approx_qfi(pops, table, opts);
}

double approx_qfi(std::span<const double> populations, const LossTable& table, ApproxQfiOptions opts) {
  check_populations(populations, table);
  const int big_n = table.n_probes();
  std::vector<double> maxima;
  if (opts.branch_cutoff > 0.0) maxima = row_maxima(table);
  double total = 0.0;
  for (int l0 = 0; l0 <= big_n; ++l0) {
    for (int l1 = 0; l1 <= big_n - l0; ++l1) {
      if (!maxima.empty() &&
          maxima[static_cast<std::size_t>(l0)] * maxima[static_cast<std::size_t>(l1)] < opts.branch_cutoff)
        continue;
      const BranchSums b = branch_sums(populations, table, l0, l1);
      if (b.p <= 0.0) continue;
      total += std::max(0.0, b.s2 - b.s1 * b.s1 / b.p);
    }
  }
  return 4.0 * total;
}

double approx_qfi_with_gradient(std::span<const double> populations, const LossTable& table,
                                std::span<double> gradient) {
  check_populations(populations, table);
  if (gradient.size() != populations.size()) throw DomainError("approx_qfi_with_gradient: gradient size mismatch");
  std::fill(gradient.begin(), gradient.end(), 0.0);
  const int big_n = table.n_probes();
  double total = 0.0;
  for (int l0 = 0; l0 <= big_n; ++l0) {
    const double* r0 = table.row(l0).data();
    for (int l1 = 0; l1 <= big_n - l0; ++l1) {
      const double* r1 = table.row(l1).data();
      const BranchSums b = branch_sums(populations, table, l0, l1);
      if (b.p <= 0.0) continue;
      total += std::max(0.0, b.s2 - b.s1 * b.s1 / b.p);
      const double mu = b.center + b.s1 / b.p;
      for (int m = l0; m <= big_n - l1; ++m) {
        const double d = m - mu;
        gradient[static_cast<std::size_t>(m)] += 4.0 * r0[m] * r1[big_n - m] * d * d;
      }
    }
  }
  return 4.0 * total;
}

double exact_qfi(const SymmetricState& state, double eta, ExactQfiOptions opts) {
  const int big_n = state.n_probes();
  if (big_n > opts.max_probes)
    throw CapabilityError("exact_qfi: N=" + std::to_string(big_n) + " exceeds oracle cap " +
                          std::to_string(opts.max_probes) + "; use approx_qfi");
  const LossTable table(big_n, eta);
  const auto amps = state.amplitudes();

  double fisher = 0.0;
  for (int lost = 0; lost <= big_n; ++lost) {
    const int dim = big_n - lost + 1;
    // Branches with equal l0 + l1 live in the same (N - lost)-probe sector
    // and add up as operators there. Basis index k = n - l0.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd v(dim);
    for (int l0 = 0; l0 <= lost; ++l0) {
      const int l1 = lost - l0;
      for (int k = 0; k < dim; ++k) {
        const int n = k + l0;
        v(k) = amps[static_cast<std::size_t>(n)] * std::sqrt(table.beta_squared(n, l0, l1));
      }
      rho.noalias() += v * v.adjoint();
    }
    if (rho.trace().real() <= 0.0) continue;

    // d rho / d phi at phi = 0: entry (k, k') picks up i (n - n') = i (k - k').
    Eigen::MatrixXcd drho(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) drho(r, c) = cplx(0.0, static_cast<double>(r - c)) * rho(r, c);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Eigen::MatrixXcd& vecs = eig.eigenvectors();
    const Eigen::MatrixXcd d_eig = vecs.adjoint() * drho * vecs;
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const double s = lambda(j) + lambda(k);
        if (s > opts.eigen_cutoff) fisher += 2.0 * std::norm(d_eig(j, k)) / s;
      }
    }
  }
  return fisher;
}

QfiValue evaluate_qfi(const SymmetricState& state, double eta, QfiKind kind) {
  switch (kind) {
    case QfiKind::pure:
      return {pure_qfi(state), kind};
    case QfiKind::approximate:
      return {approx_qfi(state, eta), kind};
    case QfiKind::exact:
      return {exact_qfi(state, eta), kind};
  }
  throw DomainError("evaluate_qfi: unknown kind");
}

double precision_from_qfi(double fisher, int repetitions) {
  if (repetitions < 1) throw UndefinedPrecisionError("precision_from_qfi: repetitions must be >= 1");
  if (!(fisher > 0.0)) throw UndefinedPrecisionError("precision_from_qfi: Fisher information must be positive");
  return 1.0 / std::sqrt(static_cast<double>(repetitions) * fisher);
}

}  // namespace mpsmetro
