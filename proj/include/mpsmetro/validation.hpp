#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mpsmetro/mps.hpp"
#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

// Random normalized states with i.i.d. Gaussian amplitudes: complex, real,
// or i^n times real.
SymmetricState random_state(int n_probes, std::mt19937_64& rng, bool complex_phases = true);
SymmetricState random_i_power_state(int n_probes, std::mt19937_64& rng);
DiagonalMPS random_mps(int n_probes, int bond_dim, std::mt19937_64& rng, double min_modulus = 0.1,
                       double max_modulus = 10.0);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // worst observed deviation
};

// Internal-consistency properties of the loss, QFI, Ramsey and MPS modules
// on seeded random inputs. `thorough` widens the sample sizes.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed, bool thorough = false);

}  // namespace mpsmetro
