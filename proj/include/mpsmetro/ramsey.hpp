#pragma once

#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

// First and second moments of the collective spin J = (Jx, Jy, Jz) of N
// spin-1/2 probes, with m = n - N/2 along z. The sign of Jy is chosen so
// that product_state(N, ProductGauge::i_power) has <Jy> = +N/2.
struct CollectiveMoments {
  double jx_mean = 0.0;
  double jy_mean = 0.0;
  double jx_second = 0.0;
  double jx_var = 0.0;
};

CollectiveMoments collective_moments(const SymmetricState& state);

// Error-propagation precision of a Jx measurement at phi = 0 under loss:
//   sqrt( Var(Jx) / <Jy>^2 + (1 - eta) / eta * N / (4 <Jy>^2) )
// with the moments taken on the input state.
// UndefinedPrecisionError if |<Jy>| <= 1e-9 or eta == 0; DomainError if eta
// lies outside [0, 1].
double ramsey_precision(const SymmetricState& state, double eta);

// Same formula from precomputed moments.
double ramsey_precision(const CollectiveMoments& moments, int n_probes, double eta);

}  // namespace mpsmetro
