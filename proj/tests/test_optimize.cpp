#include <doctest.h>

#include <cmath>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/optimize.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/ramsey.hpp"

using namespace mpsmetro;

namespace {

OptimizerOptions quick(std::uint64_t seed = 7, int starts = 4) {
  OptimizerOptions o;
  o.seed = seed;
  o.starts = starts;
  return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("D=2 recovers the N00N optimum without loss") {
  const auto r = optimize_mps(4, 2, ObjectiveSpec::qfi(1.0), quick());
  CHECK(rel(r.objective_value, 16.0) < 1e-6);
  CHECK(r.delta_phi == doctest::Approx(0.25).epsilon(1e-6));
  REQUIRE(r.mps);
  // Only n = 0 and n = N carry weight.
  CHECK(std::norm(r.state[0]) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::norm(r.state[4]) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("D=1 Ramsey reproduces the shot-noise curve") {
  for (double eta : {0.3, 0.9})
    for (int n : {1, 5, 17}) {
      const auto r = optimize_mps(n, 1, ObjectiveSpec::ramsey(eta), quick());
      CHECK(rel(r.delta_phi, 1.0 / std::sqrt(eta * n)) < 1e-6);
    }
}

TEST_CASE("D=5 is within 1% of the direct QFI optimum at N=20") {
  const auto obj = ObjectiveSpec::qfi(0.9);
  const double direct = optimize_direct(20, obj, quick()).delta_phi;
  const double mps = optimize_mps(20, 5, obj, quick()).delta_phi;
  CHECK((mps - direct) / direct <= 0.01);
  CHECK(mps >= direct - 1e-9);
}

TEST_CASE("direct optimization examples") {
  SUBCASE("decoherence-free N00N") {
    const auto r = optimize_direct(4, ObjectiveSpec::qfi(1.0), quick());
    CHECK(rel(r.objective_value, 16.0) < 1e-6);
  }
  SUBCASE("single probe at eta = 0.5") {
    const auto r = optimize_direct(1, ObjectiveSpec::qfi(0.5), quick());
    CHECK(r.objective_value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(r.state[0]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    CHECK(std::abs(r.state[1]) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
  }
  SUBCASE("Ramsey beats the product state") {
    const auto r = optimize_direct(10, ObjectiveSpec::ramsey(0.9), quick());
    CHECK(r.delta_phi <= 1.0 / 3.0 + 1e-12);
    CHECK(ramsey_precision(r.state, 0.9) == doctest::Approx(r.delta_phi).epsilon(1e-12));
  }
  SUBCASE("full_complex Ramsey matches the i^n gauge") {
    const double gauge = optimize_direct(6, ObjectiveSpec::ramsey(0.8), quick()).delta_phi;
    const double full = optimize_direct(6, ObjectiveSpec::ramsey(0.8, Gauge::full_complex), quick()).delta_phi;
    CHECK(full <= gauge + 1e-12);
    CHECK(rel(full, gauge) < 1e-6);
  }
}

TEST_CASE("minimal bond dimension") {
  const auto opts = quick(3);
  for (int n = 2; n <= 10; ++n) {
    const auto rep = minimal_bond_dimension(n, ObjectiveSpec::qfi(1.0), 0.01, opts);
    REQUIRE(rep.minimal_bond_dim);
    CHECK(*rep.minimal_bond_dim == 2);
  }
  for (double eta : {0.2, 0.7, 1.0}) {
    const auto rep = minimal_bond_dimension(1, ObjectiveSpec::qfi(eta), 0.01, opts);
    CHECK(rep.minimal_bond_dim == 1);
  }
  const auto lossy = minimal_bond_dimension(10, ObjectiveSpec::qfi(0.3), 0.01, opts);
  const auto clean = minimal_bond_dimension(10, ObjectiveSpec::qfi(0.9), 0.01, opts);
  REQUIRE(lossy.minimal_bond_dim);
  REQUIRE(clean.minimal_bond_dim);
  CHECK(*lossy.minimal_bond_dim <= *clean.minimal_bond_dim);

  const auto capped = minimal_bond_dimension(12, ObjectiveSpec::ramsey(0.9), 0.0, opts, 2);
  CHECK(capped.cap_exceeded);
  CHECK_FALSE(capped.minimal_bond_dim);
  CHECK(capped.mps_delta_phi.size() == 2);
}

TEST_CASE("ladder is monotone in D and never beats the direct optimum") {
  for (const auto& obj : {ObjectiveSpec::qfi(0.9), ObjectiveSpec::ramsey(0.9)}) {
    const double direct = optimize_direct(12, obj, quick()).delta_phi;
    const auto ladder = optimize_mps_ladder(12, 4, obj, quick());
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      CHECK(ladder[i].delta_phi >= direct - 1e-9);
      if (i > 0) CHECK(ladder[i].delta_phi <= ladder[i - 1].delta_phi * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto opts = quick(42, 5);
  opts.record_trajectories = true;
  const auto obj = ObjectiveSpec::ramsey(0.7);
  const auto one = optimize_mps(8, 2, obj, opts);
  opts.workers = 3;
  const auto three = optimize_mps(8, 2, obj, opts);
  CHECK(one.objective_value == three.objective_value);
  CHECK(*one.mps == *three.mps);
  REQUIRE(one.starts.size() == three.starts.size());
  for (std::size_t i = 0; i < one.starts.size(); ++i) {
    CHECK(one.starts[i].trajectory == three.starts[i].trajectory);
    CHECK_FALSE(one.starts[i].trajectory.empty());
  }

  opts.seed = 43;
  const auto other = optimize_mps(8, 2, obj, opts);
  bool differs = false;
  for (std::size_t i = 0; i < one.starts.size(); ++i) differs |= one.starts[i].trajectory != other.starts[i].trajectory;
  CHECK(differs);
}

TEST_CASE("QFI optima are reported with real nonnegative amplitudes") {
  const auto r = optimize_mps(9, 3, ObjectiveSpec::qfi(0.6), quick());
  for (const cplx& a : r.state.amplitudes()) {
    CHECK(a.imag() == 0.0);
    CHECK(a.real() >= 0.0);
  }
  CHECK(approx_qfi(r.state, 0.6) == doctest::Approx(r.objective_value).epsilon(1e-12));
  CHECK(r.delta_phi == doctest::Approx(precision_from_qfi(r.objective_value)).epsilon(1e-12));
  REQUIRE(r.mps);
  CHECK(*r.mps == canonical_form(*r.mps));
}

TEST_CASE("warm starts are honoured") {
  const auto obj = ObjectiveSpec::qfi(0.9);
  const auto d2 = optimize_mps(10, 2, obj, quick());
  auto opts = quick(1, 1);
  opts.warm_starts = {*d2.raw_mps};
  const auto d3 = optimize_mps(10, 3, obj, opts);
  CHECK(d3.objective_value >= d2.objective_value * (1.0 - 1e-9));
  opts.warm_starts = {DiagonalMPS(11, {1.0}, {1.0})};
  CHECK_THROWS_AS(optimize_mps(10, 3, obj, opts), DomainError);
}

TEST_CASE("invalid requests") {
  const auto opts = quick();
  CHECK_THROWS_AS(optimize_mps(0, 1, ObjectiveSpec::qfi(0.9), opts), DomainError);
  CHECK_THROWS_AS(optimize_mps(3, 0, ObjectiveSpec::qfi(0.9), opts), DomainError);
  CHECK_THROWS_AS(optimize_direct(0, ObjectiveSpec::qfi(0.9), opts), DomainError);
  CHECK_THROWS_AS(optimize_mps(3, 1, ObjectiveSpec::qfi(1.5), opts), DomainError);
  CHECK_THROWS_AS(optimize_mps(3, 1, {ObjectiveKind::approx_qfi_max, 0.9, Gauge::i_power_real}, opts),
                  DomainError);
  CHECK_THROWS_AS(optimize_mps(3, 1, ObjectiveSpec::ramsey(0.0), opts), DomainError);
  CHECK_THROWS_AS(optimize_mps(3, 1, ObjectiveSpec::ramsey(0.9, Gauge::real_nonneg), opts), DomainError);
  auto bad = opts;
  bad.starts = 0;
  CHECK_THROWS_AS(optimize_mps(3, 1, ObjectiveSpec::qfi(0.9), bad), DomainError);
  bad = opts;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(optimize_direct(3, ObjectiveSpec::qfi(0.9), bad), DomainError);
  bad = opts;
  bad.direct_max_probes = 5;
  CHECK_THROWS_AS(optimize_direct(6, ObjectiveSpec::qfi(0.9), bad), CapabilityError);
  CHECK_THROWS_AS(minimal_bond_dimension(4, ObjectiveSpec::qfi(0.9), -0.1, opts), DomainError);
}
