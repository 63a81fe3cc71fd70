#include "mpsmetro/symstate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mpsmetro/errors.hpp"

namespace mpsmetro {

namespace {

double squared_norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& a : v) acc += std::norm(a);
  return acc;
}

}  // namespace

SymmetricState::SymmetricState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw DomainError("SymmetricState: empty amplitude vector");
  const double nrm = squared_norm(amps_);
  if (!(std::abs(nrm - 1.0) <= 1e-12))
    throw DomainError("SymmetricState: amplitudes not normalized (norm^2 = " + std::to_string(nrm) + ")");
}

std::vector<double> SymmetricState::populations() const {
  std::vector<double> w(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) w[i] = std::norm(amps_[i]);
  return w;
}

double log_binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n)
    throw DomainError("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  const long long m = std::min(k, n - k);
  if (m == 0) return 0.0;
  // Short products are summed term by term; lgamma differences of large
  // arguments lose absolute accuracy when the result is small.
  if (m <= 64) {
    double acc = 0.0;
    for (long long i = 1; i <= m; ++i)
      acc += std::log(static_cast<double>(n - m + i) / static_cast<double>(i));
    return acc;
  }
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

SymmetricState normalize(std::span<const cplx> raw) {
  if (raw.empty()) throw DegenerateStateError("normalize: empty vector");
  // Scale by the largest modulus first so the squared norm cannot overflow.
  double peak = 0.0;
  for (const auto& a : raw) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw DegenerateStateError("normalize: non-finite amplitude");
    peak = std::max(peak, std::abs(a));
  }
  if (peak == 0.0) throw DegenerateStateError("normalize: all-zero amplitude vector");
  std::vector<cplx> out(raw.begin(), raw.end());
  for (auto& a : out) a /= peak;
  const double nrm = std::sqrt(squared_norm(out));
  for (auto& a : out) a /= nrm;
  return SymmetricState(std::move(out));
}

ExcitationMoments excitation_moments(const SymmetricState& state) {
  double m1 = 0.0;
  double m2 = 0.0;
  const int n_max = state.n_probes();
  for (int n = 0; n <= n_max; ++n) {
    const double w = std::norm(state[n]);
    m1 += w * n;
    m2 += w * n * n;
  }
  return {m1, std::max(0.0, m2 - m1 * m1)};
}

SymmetricState noon_state(int n_probes) {
  if (n_probes < 1) throw DomainError("noon_state: need N >= 1");
  std::vector<cplx> a(static_cast<std::size_t>(n_probes) + 1, 0.0);
  a.front() = a.back() = 1.0 / std::numbers::sqrt2;
  return SymmetricState(std::move(a));
}

SymmetricState product_state(int n_probes, ProductGauge gauge) {
  if (n_probes < 1) throw DomainError("product_state: need N >= 1");
  const double half_log2 = 0.5 * n_probes * std::numbers::ln2;
  std::vector<cplx> a(static_cast<std::size_t>(n_probes) + 1);
  static constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int n = 0; n <= n_probes; ++n) {
    const double mag = std::exp(0.5 * log_binomial(n_probes, n) - half_log2);
    a[static_cast<std::size_t>(n)] = gauge == ProductGauge::i_power ? mag * kIPowers[n % 4] : cplx(mag);
  }
  return normalize(a);
}

}  // namespace mpsmetro
