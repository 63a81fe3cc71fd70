#include "mpsmetro/ramsey.hpp"

#include <cmath>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/losschan.hpp"

namespace mpsmetro {

namespace {

// <n+1| J+ |n> = sqrt((n + 1)(N - n)).
inline double ladder(int n, int big_n) {
  if (n < 0 || n >= big_n) return 0.0;
  return std::sqrt(static_cast<double>(n + 1) * static_cast<double>(big_n - n));
}

}  // namespace

CollectiveMoments collective_moments(const SymmetricState& state) {
  const int big_n = state.n_probes();
  cplx j_plus = 0.0;
  cplx j_plus_sq = 0.0;
  double anticomm = 0.0;  // <J+J- + J-J+>
  for (int n = 0; n <= big_n; ++n) {
    const cplx a = state[n];
    const double c_n = ladder(n, big_n);
    const double c_prev = ladder(n - 1, big_n);
    anticomm += std::norm(a) * (c_prev * c_prev + c_n * c_n);
    if (n + 1 <= big_n) j_plus += std::conj(state[n + 1]) * a * c_n;
    if (n + 2 <= big_n) j_plus_sq += std::conj(state[n + 2]) * a * c_n * ladder(n + 1, big_n);
  }
  CollectiveMoments m;
  m.jx_mean = j_plus.real();
  m.jy_mean = -j_plus.imag();
  m.jx_second = 0.25 * (2.0 * j_plus_sq.real() + anticomm);
  m.jx_var = std::max(0.0, m.jx_second - m.jx_mean * m.jx_mean);
  return m;
}

double ramsey_precision(const CollectiveMoments& moments, int n_probes, double eta) {
  LossChannel::checked(eta);
  if (eta == 0.0) throw UndefinedPrecisionError("ramsey_precision: eta = 0 means every probe is lost");
  if (!(std::abs(moments.jy_mean) > 1e-9)) throw UndefinedPrecisionError("ramsey_precision: <Jy> vanishes, no signal");
  const double jy2 = moments.jy_mean * moments.jy_mean;
  const double loss_term = (1.0 - eta) / eta * n_probes / (4.0 * jy2);
  return std::sqrt(moments.jx_var / jy2 + loss_term);
}

double ramsey_precision(const SymmetricState& state, double eta) {
  return ramsey_precision(collective_moments(state), state.n_probes(), eta);
}

}  // namespace mpsmetro
