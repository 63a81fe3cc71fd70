#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mpsmetro {

using cplx = std::complex<double>;

// Pure state of N indistinguishable two-level probes written in the Dicke
// basis |n, N-n>, n = number of probes in |0>. Always normalized.
class SymmetricState {
 public:
  // Takes ownership of an already normalized amplitude vector; throws
  // DomainError if it is empty or its norm differs from 1 by more than 1e-12.
  explicit SymmetricState(std::vector<cplx> amplitudes);

  int n_probes() const { return static_cast<int>(amps_.size()) - 1; }
  std::span<const cplx> amplitudes() const { return amps_; }
  const cplx& operator[](int n) const { return amps_[static_cast<std::size_t>(n)]; }

  // |alpha_n|^2 for n = 0..N.
  std::vector<double> populations() const;

 private:
  std::vector<cplx> amps_;
};

struct ExcitationMoments {
  double mean = 0.0;
  double variance = 0.0;
};

enum class ProductGauge { real, i_power };

// ln C(n, k) via log-gamma. DomainError unless 0 <= k <= n.
double log_binomial(long long n, long long k);

// Divides by the Euclidean norm. DegenerateStateError on the zero vector.
SymmetricState normalize(std::span<const cplx> raw);

ExcitationMoments excitation_moments(const SymmetricState& state);

SymmetricState noon_state(int n_probes);
SymmetricState product_state(int n_probes, ProductGauge gauge = ProductGauge::real);

}  // namespace mpsmetro
