// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpsmetro/losschan.hpp"
#include "mpsmetro/mps.hpp"
#include "mpsmetro/optimize.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/ramsey.hpp"
#include "mpsmetro/sweep.hpp"
#include "mpsmetro/validation.hpp"
#include "oracles.hpp"

using namespace mpsmetro;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("C%d %s  %s  [%.1f s]  %s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), seconds_since(t0),
              o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome noon_recovery() {
  const auto t0 = Clock::now();
  OptimizerOptions opts;
  opts.seed = 7;
  double worst = 0.0;
  double worst_tail = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const auto r = optimize_mps(n, 2, ObjectiveSpec::qfi(1.0), opts);
    worst = std::max(worst, std::abs(r.objective_value - n * n) / (n * n));
    const auto pops = r.state.populations();
    worst_tail = std::max({worst_tail, std::abs(pops.front() - 0.5), std::abs(pops.back() - 0.5)});
  }
  const double t = seconds_since(t0);
  return {worst < 1e-6 && worst_tail < 1e-6 && t < 30.0,
          fmt("max rel |F-N^2|/N^2 = %.2e, max N00N weight error = %.2e, %.1f s (limit 30 s)", worst, worst_tail, t)};
}

Outcome shot_noise_curve() {
  const auto t0 = Clock::now();
  OptimizerOptions opts;
  opts.seed = 7;
  double worst = 0.0;
  for (double eta : {0.3, 0.9})
    for (int n = 1; n <= 100; ++n) {
      const double target = 1.0 / std::sqrt(eta * n);
      const auto r = optimize_mps(n, 1, ObjectiveSpec::ramsey(eta), opts);
      worst = std::max(worst, std::abs(r.delta_phi - target) / target);
    }
  const double t = seconds_since(t0);
  return {worst < 1e-6 && t < 120.0, fmt("max rel deviation = %.2e, %.1f s (limit 120 s)", worst, t)};
}

// Shared by criteria 3 and 7: eta = 0.9, D = 1..5 ladder and direct reference.
struct DeskSweep {
  std::vector<SweepRecord> records;
  double seconds = 0.0;
};

DeskSweep run_desk_sweep() {
  SweepSpec spec;
  spec.n_list = {10, 20, 40, 60, 80, 100};
  spec.d_list = {1, 2, 3, 4, 5};
  spec.eta_list = {0.9};
  spec.objectives = {ObjectiveKind::approx_qfi_max, ObjectiveKind::ramsey_min};
  spec.optimizer.seed = 2024;
  const auto t0 = Clock::now();
  DeskSweep out;
  out.records = run_sweep(spec, 4);
  out.seconds = seconds_since(t0);
  return out;
}

Outcome desk_one_percent(const DeskSweep& sweep) {
  std::ostringstream detail;
  bool pass = sweep.seconds < 600.0;
  for (const auto kind : {ObjectiveKind::approx_qfi_max, ObjectiveKind::ramsey_min}) {
    detail << to_string(kind) << ":";
    for (const auto& direct : sweep.records) {
      if (direct.d != 0 || direct.objective != kind) continue;
      for (const auto& r : sweep.records) {
        if (r.d != 5 || r.n != direct.n || r.objective != kind) continue;
        const double excess = (r.delta_phi - direct.delta_phi) / direct.delta_phi;
        pass = pass && excess <= 0.01;
        char buf[64];
        std::snprintf(buf, sizeof buf, " N=%d %.2e%s", r.n, excess, excess <= 0.01 ? "" : "!");
        detail << buf;
      }
    }
    detail << "; ";
  }
  detail << "relative excess of D=5 over direct (limit 1e-2), " << fmt("%.1f s (limit 600 s)", sweep.seconds);
  return {pass, detail.str()};
}

Outcome loss_ordering() {
  OptimizerOptions opts;
  opts.seed = 5;
  std::ostringstream detail;
  bool pass = true;
  for (int n : {10, 30, 50}) {
    const auto lossy = minimal_bond_dimension(n, ObjectiveSpec::qfi(0.3), 0.01, opts);
    const auto clean = minimal_bond_dimension(n, ObjectiveSpec::qfi(0.9), 0.01, opts);
    // A cap hit at eta = 0.3 cannot be ordered below anything.
    const int d_lossy = lossy.minimal_bond_dim.value_or(1000);
    const int d_clean = clean.minimal_bond_dim.value_or(1000);
    pass = pass && lossy.minimal_bond_dim && d_lossy <= d_clean;
    detail << "N=" << n << ": D*(0.3)=" << d_lossy << " D*(0.9)=" << d_clean << "; ";
  }
  return {pass, detail.str()};
}

Outcome oracle_suite() {
  std::mt19937_64 rng(20240601);
  std::ostringstream detail;
  bool pass = true;
  auto sub = [&](const char* name, bool ok, double worst) {
    pass = pass && ok;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s %s (%.2e); ", name, ok ? "ok" : "FAILED", worst);
    detail << buf;
  };
  const double etas[] = {0.3, 0.6, 0.9};

  {
    std::uniform_int_distribution<int> pick_n(1, 200);
    std::uniform_real_distribution<double> pick_eta(0.0, 1.0);
    double worst_beta = 0.0;
    double worst_p = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int n = pick_n(rng);
      const double eta = pick_eta(rng);
      const auto s = random_state(n, rng);
      const LossTable table(n, eta);
      for (int m = 0; m <= n; ++m) {
        double sum = 0.0;
        for (int l0 = 0; l0 <= m; ++l0)
          for (int l1 = 0; l1 <= n - m; ++l1) sum += table.beta_squared(m, l0, l1);
        worst_beta = std::max(worst_beta, std::abs(sum - 1.0));
      }
      double total = 0.0;
      for (const auto& row : all_branch_probabilities(s, eta))
        for (double p : row) total += p;
      worst_p = std::max(worst_p, std::abs(total - 1.0));
    }
    sub("beta-completeness", worst_beta <= 1e-10, worst_beta);
    sub("sum p = 1", worst_p <= 1e-10, worst_p);
  }
  {
    std::uniform_int_distribution<int> pick_n(1, 20);
    double worst_approx = -1e300;
    double worst_bound = -1e300;
    for (int i = 0; i < 50; ++i) {
      const int n = pick_n(rng);
      const double eta = etas[i % 3];
      const auto s = random_state(n, rng);
      const double exact = exact_qfi(s, eta);
      worst_approx = std::max(worst_approx, exact - approx_qfi(s, eta));
      worst_bound = std::max(worst_bound, exact - eta * n / (1.0 - eta));
    }
    sub("exact <= approx", worst_approx <= 1e-8, worst_approx);
    sub("exact <= eta N/(1-eta)", worst_bound <= 1e-8, worst_bound);
  }
  {
    std::uniform_int_distribution<int> pick_n(1, 8);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int n = pick_n(rng);
      const double eta = etas[i % 3];
      const auto s = random_state(n, rng);
      const double exact = exact_qfi(s, eta);
      const double fid = oracle::fidelity_qfi(s, eta);
      worst = std::max(worst, std::abs(exact - fid) / std::max(std::abs(fid), 1e-300));
    }
    sub("exact vs fidelity oracle", worst <= 1e-5, worst);
  }
  {
    std::uniform_int_distribution<int> pick_n(1, 50);
    std::uniform_int_distribution<int> pick_d(1, 5);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const auto m = random_mps(pick_n(rng), pick_d(rng), rng);
      const auto got = mps_amplitudes(m);
      const auto want = oracle::mps_amplitudes_bigfloat(m);
      for (std::size_t k = 0; k < want.size(); ++k)
        worst = std::max(worst, std::abs(got.amplitudes()[k] - want[k]));
    }
    sub("MPS vs high-precision oracle", worst <= 1e-10, worst);
    bool finite = true;
    for (int i = 0; i < 5; ++i) {
      const auto s = mps_amplitudes(random_mps(500, 5, rng));
      for (const cplx& a : s.amplitudes()) finite = finite && std::isfinite(a.real()) && std::isfinite(a.imag());
    }
    sub("MPS finite at N=500, D=5", finite, 0.0);
  }
  {
    std::uniform_int_distribution<int> pick_n(1, 20);
    double worst = -1e300;
    for (int i = 0; i < 30; ++i) {
      const int n = pick_n(rng);
      const double eta = etas[i % 3];
      const auto s = random_i_power_state(n, rng);
      try {
        worst = std::max(worst, 1.0 / std::sqrt(exact_qfi(s, eta)) - ramsey_precision(s, eta));
      } catch (const std::exception&) {
        // <Jy> = 0: no Ramsey signal, the inequality holds trivially.
      }
    }
    sub("Ramsey >= Cramer-Rao", worst <= 1e-9, worst);
  }
  return {pass, detail.str()};
}

Outcome monotone_and_deterministic() {
  std::ostringstream detail;
  bool pass = true;
  OptimizerOptions opts;
  opts.seed = 99;
  for (const auto& obj : {ObjectiveSpec::qfi(0.9), ObjectiveSpec::ramsey(0.9)}) {
    const auto ladder = optimize_mps_ladder(20, 5, obj, opts);
    double worst = 0.0;
    for (std::size_t d = 1; d < ladder.size(); ++d)
      worst = std::max(worst, (ladder[d].delta_phi - ladder[d - 1].delta_phi) / ladder[d - 1].delta_phi);
    pass = pass && worst <= 1e-9;
    detail << to_string(obj.kind) << fmt(" worst D->D+1 worsening %.2e; ", worst);
  }

  SweepSpec spec;
  spec.n_list = {8, 14};
  spec.d_list = {1, 2, 3};
  spec.eta_list = {0.6, 0.9};
  spec.objectives = {ObjectiveKind::approx_qfi_max, ObjectiveKind::ramsey_min};
  spec.optimizer.seed = 123;
  spec.optimizer.starts = 6;
  spec.record_timing = false;
  std::ostringstream a;
  std::ostringstream b;
  write_csv(a, run_sweep(spec, 1));
  write_csv(b, run_sweep(spec, 4));
  const bool same = a.str() == b.str();
  pass = pass && same;
  detail << "CSV with 1 vs 4 workers " << (same ? "byte-identical" : "DIFFERS");
  return {pass, detail.str()};
}

Outcome performance(const DeskSweep& sweep) {
  std::mt19937_64 rng(3);
  const auto s = random_state(500, rng);
  const auto t0 = Clock::now();
  const double f = approx_qfi(s, 0.9);
  const double single = seconds_since(t0);
  const bool pass = std::isfinite(f) && single <= 1.0 && sweep.seconds <= 600.0;
  return {pass, fmt("approx_qfi at N=500: %.3f s (limit 1 s); criterion-3 sweep with 4 workers: %.1f s (limit 600 s)",
                    single, sweep.seconds)};
}

}  // namespace

int main() {
  report(1, "decoherence-free N00N optimum at D=2", noon_recovery);
  report(2, "D=1 Ramsey equals 1/sqrt(eta N)", shot_noise_curve);
  DeskSweep sweep;
  report(3, "D=5 within 1% of direct at eta=0.9", [&] {
    sweep = run_desk_sweep();
    return desk_one_percent(sweep);
  });
  report(4, "minimal D ordered by loss strength", loss_ordering);
  report(5, "oracle suite", oracle_suite);
  report(6, "monotonicity in D and determinism", monotone_and_deterministic);
  report(7, "performance", [&] { return performance(sweep); });
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
