#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/losschan.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/validation.hpp"
#include "oracles.hpp"

using namespace mpsmetro;

TEST_CASE("pure_qfi examples") {
  CHECK(pure_qfi(noon_state(4)) == doctest::Approx(16.0).epsilon(1e-14));
  for (int n : {1, 5, 33}) CHECK(pure_qfi(product_state(n)) == doctest::Approx(n).epsilon(1e-12));
  std::vector<cplx> basis(4, 0.0);
  basis[2] = 1.0;
  CHECK(pure_qfi(SymmetricState(basis)) == 0.0);
}

TEST_CASE("approx_qfi hand-enumerated values") {
  std::mt19937_64 rng(1);
  const auto s = random_state(9, rng);
  CHECK(approx_qfi(s, 1.0) == doctest::Approx(pure_qfi(s)).epsilon(1e-12));

  // One balanced probe: only the no-loss branch has spread, p = eta, Var = 1/4.
  for (double eta : {0.1, 0.5, 0.8}) CHECK(approx_qfi(product_state(1), eta) == doctest::Approx(eta).epsilon(1e-14));
  // Two-probe N00N: only (0,0) mixes n = 0 and n = 2, p = eta^2, Var = 1.
  CHECK(approx_qfi(noon_state(2), 0.9) == doctest::Approx(3.24).epsilon(1e-14));
  for (double eta : {0.2, 0.7}) CHECK(approx_qfi(noon_state(2), eta) == doctest::Approx(4 * eta * eta).epsilon(1e-14));
  // Product states: F~ = eta N.
  for (int n : {3, 20, 150}) CHECK(approx_qfi(product_state(n), 0.6) == doctest::Approx(0.6 * n).epsilon(1e-10));
}

TEST_CASE("approx_qfi agrees with the per-branch definition") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const int big_n = 1 + t * 3;
    const double eta = 0.15 + 0.08 * t;
    const auto s = random_state(big_n, rng);
    double ref = 0.0;
    for (int l0 = 0; l0 <= big_n; ++l0)
      for (int l1 = 0; l1 <= big_n - l0; ++l1) {
        if (branch_probability(s, l0, l1, eta) <= 0.0) continue;
        const auto br = conditional_distribution(s, l0, l1, eta);
        double m1 = 0, m2 = 0;
        for (int n = br.first_n(); n <= br.last_n(); ++n) {
          m1 += br.q(n) * n;
          m2 += br.q(n) * n * n;
        }
        ref += br.probability * 4 * (m2 - m1 * m1);
      }
    CHECK(approx_qfi(s, eta) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("approx_qfi is phase invariant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_state(5 + t, rng);
    std::vector<cplx> r(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& z : r) z *= std::polar(1.0, ph(rng));
    // Both evaluations see identical populations up to the last bit of |z|^2.
    CHECK(approx_qfi(SymmetricState(r), 0.8) == doctest::Approx(approx_qfi(s, 0.8)).epsilon(1e-14));
  }
}

TEST_CASE("branch cutoff: zero is exact, positive only drops tiny branches") {
  std::mt19937_64 rng(4);
  const auto s = random_state(80, rng);
  const double exact = approx_qfi(s, 0.9);
  CHECK(approx_qfi(s, 0.9, {0.0}) == exact);
  const double cut = approx_qfi(s, 0.9, {1e-30});
  CHECK(cut <= exact);
  CHECK(cut == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences and Euler's identity") {
  std::mt19937_64 rng(5);
  const auto s = random_state(12, rng);
  const LossTable table(12, 0.7);
  auto pops = s.populations();
  std::vector<double> grad(pops.size());
  const double f = approx_qfi_with_gradient(pops, table, grad);
  CHECK(f == doctest::Approx(approx_qfi(pops, table)).epsilon(1e-13));
  double euler = 0.0;
  for (std::size_t i = 0; i < pops.size(); ++i) euler += grad[i] * pops[i];
  CHECK(euler == doctest::Approx(f).epsilon(1e-12));
  std::vector<double> scratch(pops.size());
  for (std::size_t m = 0; m < pops.size(); ++m) {
    const double h = 1e-6;
    auto up = pops;
    auto dn = pops;
    up[m] += h;
    dn[m] -= h;
    const double fd = (approx_qfi_with_gradient(up, table, scratch) - approx_qfi_with_gradient(dn, table, scratch)) / (2 * h);
    CHECK(grad[m] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("exact_qfi hand values and limits") {
  CHECK(exact_qfi(product_state(1), 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_state(1 + 2 * t, rng);
    CHECK(exact_qfi(s, 1.0) == doctest::Approx(pure_qfi(s)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(exact_qfi(product_state(31), 0.9), CapabilityError);
  CHECK_NOTHROW(exact_qfi(product_state(31), 0.9, {40, 1e-12}));
}

TEST_CASE("exact_qfi agrees with the fidelity oracle") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 12; ++t) {
    const int big_n = 1 + t % 8;
    const double eta = 0.5 + 0.04 * t;
    const auto s = random_state(big_n, rng);
    const double ex = exact_qfi(s, eta);
    const double fid = oracle::fidelity_qfi(s, eta);
    INFO("N=" << big_n << " eta=" << eta << " exact=" << ex << " fidelity=" << fid);
    CHECK(std::abs(ex - fid) <= 1e-5 * ex);
  }
  // Spec example: N = 4, eta = 0.8.
  const auto s = random_state(4, rng);
  CHECK(std::abs(exact_qfi(s, 0.8) - oracle::fidelity_qfi(s, 0.8)) <= 1e-5 * exact_qfi(s, 0.8));
}

TEST_CASE("exact_qfi ordering properties") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const int big_n = 1 + t % 12;
    const auto s = random_state(big_n, rng);
    double previous = 0.0;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      const double ex = exact_qfi(s, eta);
      CHECK(ex <= approx_qfi(s, eta) + 1e-8);
      CHECK(ex <= eta * big_n / (1 - eta) + 1e-8);
      CHECK(ex >= previous - 1e-10);
      previous = ex;
    }
  }
}

TEST_CASE("precision_from_qfi") {
  CHECK(precision_from_qfi(100.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(precision_from_qfi(0.9 * 10) == doctest::Approx(1.0 / std::sqrt(9.0)).epsilon(1e-15));
  CHECK(precision_from_qfi(4.0, 25) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(precision_from_qfi(0.0), UndefinedPrecisionError);
  CHECK_THROWS_AS(precision_from_qfi(-1.0), UndefinedPrecisionError);
}

TEST_CASE("evaluate_qfi tags the kind") {
  const auto v = evaluate_qfi(noon_state(3), 0.9, QfiKind::exact);
  CHECK(v.kind == QfiKind::exact);
  CHECK(v.value == doctest::Approx(exact_qfi(noon_state(3), 0.9)));
}

TEST_CASE("approx_qfi at N = 500 runs within the one-second budget") {
  std::mt19937_64 rng(9);
  const auto s = random_state(500, rng);
  const auto t0 = std::chrono::steady_clock::now();
  const double f = approx_qfi(s, 0.9);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("approx_qfi N=500: " << secs << " s");
  CHECK(std::isfinite(f));
  CHECK(secs <= 1.0);
}
