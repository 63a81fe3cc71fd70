#include "mpsmetro/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/losschan.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/ramsey.hpp"

namespace mpsmetro {

namespace {

std::string describe(double worst) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst excess over tolerance %.3e", worst);
  return buf;
}

// Runs body() and reports pass iff the returned worst-case excess is <= 0.
CheckResult check(std::string name, const std::function<double()>& body) {
  try {
    const double worst = body();
    return {std::move(name), worst <= 0.0, describe(worst)};
  } catch (const std::exception& e) {
    return {std::move(name), false, std::string("exception: ") + e.what()};
  }
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

SymmetricState random_state(int n_probes, std::mt19937_64& rng, bool complex_phases) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(static_cast<std::size_t>(n_probes) + 1);
  for (auto& z : a) z = complex_phases ? cplx(g(rng), g(rng)) : cplx(g(rng));
  return normalize(a);
}

SymmetricState random_i_power_state(int n_probes, std::mt19937_64& rng) {
  static constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> a(static_cast<std::size_t>(n_probes) + 1);
  for (int n = 0; n <= n_probes; ++n) a[static_cast<std::size_t>(n)] = kIPowers[n % 4] * g(rng);
  return normalize(a);
}

DiagonalMPS random_mps(int n_probes, int bond_dim, std::mt19937_64& rng, double min_modulus, double max_modulus) {
  std::uniform_real_distribution<double> logmod(std::log(min_modulus), std::log(max_modulus));
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::vector<cplx> a(static_cast<std::size_t>(bond_dim));
  std::vector<cplx> b(static_cast<std::size_t>(bond_dim));
  for (int d = 0; d < bond_dim; ++d) {
    a[static_cast<std::size_t>(d)] = std::polar(std::exp(logmod(rng)), phase(rng));
    b[static_cast<std::size_t>(d)] = std::polar(std::exp(logmod(rng)), phase(rng));
  }
  return {n_probes, std::move(a), std::move(b)};
}

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, bool thorough) {
  std::vector<CheckResult> out;
  const int scale = thorough ? 4 : 1;
  std::mt19937_64 rng(seed);

  out.push_back(check("beta-completeness: sum_{l0,l1} beta^2 = 1 for every n", [&] {
    double worst = -1.0;
    for (int big_n : {1, 2, 7, 40, 120}) {
      for (double eta : {0.0, 0.3, 0.75, 1.0}) {
        const LossTable t(big_n, eta);
        for (int n = 0; n <= big_n; ++n) {
          double s = 0.0;
          for (int l0 = 0; l0 <= n; ++l0)
            for (int l1 = 0; l1 <= big_n - n; ++l1) s += t.beta_squared(n, l0, l1);
          worst = std::max(worst, std::abs(s - 1.0) - 1e-10);
        }
      }
    }
    return worst;
  }));

  out.push_back(check("branch probabilities sum to 1", [&] {
    double worst = -1.0;
    for (int i = 0; i < 10 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 200);
      const double eta = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const auto probs = all_branch_probabilities(random_state(big_n, rng), eta);
      double s = 0.0;
      for (const auto& row : probs)
        for (double p : row) {
          if (p < 0.0) return 1.0;
          s += p;
        }
      worst = std::max(worst, std::abs(s - 1.0) - 1e-10);
    }
    return worst;
  }));

  out.push_back(check("telescoping: sum_b p_b E_q[n^2] = <n^2>", [&] {
    double worst = -1.0;
    for (int i = 0; i < 10 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 60);
      const double eta = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      const SymmetricState s = random_state(big_n, rng);
      const LossTable t(big_n, eta);
      const auto pops = s.populations();
      double lhs = 0.0;
      double rhs = 0.0;
      for (int n = 0; n <= big_n; ++n) rhs += pops[static_cast<std::size_t>(n)] * n * n;
      for (int l0 = 0; l0 <= big_n; ++l0)
        for (int l1 = 0; l1 <= big_n - l0; ++l1)
          for (int n = l0; n <= big_n - l1; ++n)
            lhs += pops[static_cast<std::size_t>(n)] * t.beta_squared(n, l0, l1) * n * n;
      worst = std::max(worst, std::abs(lhs - rhs) - 1e-10 * std::max(1.0, rhs));
    }
    return worst;
  }));

  out.push_back(check("approx_qfi is blind to amplitude phases", [&] {
    double worst = -1.0;
    for (int i = 0; i < 5 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 40);
      const SymmetricState s = random_state(big_n, rng);
      std::vector<cplx> rotated(s.amplitudes().begin(), s.amplitudes().end());
      std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
      for (auto& z : rotated) z = std::abs(z) * std::polar(1.0, ph(rng));
      const double a = approx_qfi(s, 0.7);
      const double b = approx_qfi(SymmetricState(rotated), 0.7);
      worst = std::max(worst, std::abs(a - b) - 1e-12 * std::max(1.0, a));
    }
    return worst;
  }));

  out.push_back(check("exact_qfi <= approx_qfi and <= eta N / (1 - eta)", [&] {
    double worst = -1.0;
    for (int i = 0; i < 8 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 14);
      const SymmetricState s = random_state(big_n, rng);
      for (double eta : {0.3, 0.6, 0.9}) {
        const double ex = exact_qfi(s, eta);
        worst = std::max(worst, ex - approx_qfi(s, eta) - 1e-8);
        worst = std::max(worst, ex - eta * big_n / (1.0 - eta) - 1e-8);
      }
    }
    return worst;
  }));

  out.push_back(check("exact_qfi equals pure_qfi without loss", [&] {
    double worst = -1.0;
    for (int i = 0; i < 5 * scale; ++i) {
      const SymmetricState s = random_state(uniform_int(rng, 1, 20), rng);
      worst = std::max(worst, std::abs(exact_qfi(s, 1.0) - pure_qfi(s)) - 1e-10 * std::max(1.0, pure_qfi(s)));
    }
    return worst;
  }));

  out.push_back(check("ramsey_precision >= 1/sqrt(exact_qfi)", [&] {
    double worst = -1.0;
    for (int i = 0; i < 8 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 16);
      const SymmetricState s = random_i_power_state(big_n, rng);
      const CollectiveMoments m = collective_moments(s);
      if (std::abs(m.jy_mean) <= 1e-6) continue;
      for (double eta : {0.4, 0.8, 1.0}) {
        const double bound = precision_from_qfi(exact_qfi(s, eta));
        worst = std::max(worst, bound - ramsey_precision(s, eta) - 1e-9);
      }
    }
    return worst;
  }));

  out.push_back(check("MPS pair permutation and zero-pair embedding leave amplitudes unchanged", [&] {
    double worst = -1.0;
    for (int i = 0; i < 5 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 60);
      const DiagonalMPS m = random_mps(big_n, uniform_int(rng, 1, 5), rng);
      const SymmetricState ref = mps_amplitudes(m);
      auto a = m.diag0();
      auto b = m.diag1();
      std::reverse(a.begin(), a.end());
      std::reverse(b.begin(), b.end());
      const SymmetricState perm = mps_amplitudes(DiagonalMPS(big_n, a, b));
      const SymmetricState emb = mps_amplitudes(m.with_pair(0.0, 0.0));
      for (int n = 0; n <= big_n; ++n) {
        worst = std::max(worst, std::abs(perm[n] - ref[n]) - 1e-14);
        worst = std::max(worst, std::abs(emb[n] - ref[n]));
      }
    }
    return worst;
  }));

  out.push_back(check("canonical_form preserves amplitudes up to global phase", [&] {
    double worst = -1.0;
    for (int i = 0; i < 5 * scale; ++i) {
      const int big_n = uniform_int(rng, 1, 60);
      const DiagonalMPS m = random_mps(big_n, uniform_int(rng, 1, 5), rng);
      const SymmetricState x = mps_amplitudes(m);
      const SymmetricState y = mps_amplitudes(canonical_form(m));
      cplx overlap = 0.0;
      for (int n = 0; n <= big_n; ++n) overlap += std::conj(x[n]) * y[n];
      worst = std::max(worst, 1.0 - std::abs(overlap) - 1e-10);
    }
    return worst;
  }));

  return out;
}

}  // namespace mpsmetro
