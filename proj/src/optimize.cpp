#include "mpsmetro/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/losschan.hpp"
#include "mpsmetro/nelder_mead.hpp"
#include "mpsmetro/parallel.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/ramsey.hpp"

namespace mpsmetro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr cplx kI{0.0, 1.0};

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------------------------
// Objective evaluation shared by both optimizers.

class MeritEvaluator {
 public:
  MeritEvaluator(int n_probes, const ObjectiveSpec& objective)
      : n_(n_probes), obj_(objective), table_(n_probes, objective.eta) {}

  // Merit of the state; QFI uses only populations.
  double merit(const SymmetricState& state) const {
    if (obj_.kind == ObjectiveKind::approx_qfi_max) {
      const auto pops = state.populations();
      return approx_qfi(pops, table_);
    }
    return ramsey_precision(state, obj_.eta);
  }

  // Value minimized by the search: -F~ or delta phi; +inf when undefined.
  double loss(const SymmetricState& state) const {
    try {
      const double m = merit(state);
      return obj_.kind == ObjectiveKind::approx_qfi_max ? -m : m;
    } catch (const UndefinedPrecisionError&) {
      return kInf;
    }
  }

  double merit_from_loss(double loss) const { return obj_.kind == ObjectiveKind::approx_qfi_max ? -loss : loss; }

  int n_probes() const { return n_; }
  const ObjectiveSpec& objective() const { return obj_; }
  const LossTable& table() const { return table_; }

 private:
  int n_;
  ObjectiveSpec obj_;
  LossTable table_;
};

// Reported state: QFI optima are mapped to |alpha_n| (same objective value).
SymmetricState reported_state(const SymmetricState& state, const ObjectiveSpec& objective) {
  if (objective.gauge != Gauge::real_nonneg) return state;
  std::vector<cplx> mags(state.amplitudes().size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(state.amplitudes()[i]);
  return normalize(mags);
}

// ---------------------------------------------------------------------------
// MPS search space.

// Each pair is stored as (theta, omega[, phase_a, phase_b]) with
//   a_d = exp(omega_d / N) cos(theta_d) [e^{i phase_a}],
//   b_d = exp(omega_d / N) sin(theta_d) [e^{i phase_b}],
// so omega_d is the log-weight of pair d in every amplitude. Searching over
// raw diagonals is badly conditioned for large N because the terms scale
// like |a_d|^N.
class MpsParameterization {
 public:
  MpsParameterization(int n_probes, int bond_dim, Gauge gauge) : n_(n_probes), d_(bond_dim), gauge_(gauge) {}

  std::size_t size() const { return static_cast<std::size_t>(d_) * (gauge_ == Gauge::full_complex ? 4 : 2); }

  DiagonalMPS to_mps(std::span<const double> p) const {
    const auto d = static_cast<std::size_t>(d_);
    std::vector<cplx> a(d);
    std::vector<cplx> b(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double r = std::exp(p[d + i] / n_);
      a[i] = r * std::cos(p[i]);
      b[i] = r * std::sin(p[i]);
      if (gauge_ == Gauge::full_complex) {
        a[i] *= std::polar(1.0, p[2 * d + i]);
        b[i] *= std::polar(1.0, p[3 * d + i]);
      } else if (gauge_ == Gauge::i_power_real) {
        a[i] *= kI;
      }
    }
    return {n_, std::move(a), std::move(b)};
  }

  // Inverse of to_mps up to rounding. Zero pairs (and missing trailing pairs)
  // get a log-weight so low that their contribution underflows to zero.
  std::vector<double> from_mps(const DiagonalMPS& mps) const {
    if (mps.n_probes() != n_ || mps.bond_dim() > d_)
      throw DomainError("warm start does not fit N=" + std::to_string(n_) + ", D=" + std::to_string(d_));
    const auto d = static_cast<std::size_t>(d_);
    std::vector<double> p(size(), 0.0);
    for (std::size_t i = 0; i < d; ++i) p[d + i] = kDeadWeight;
    for (std::size_t i = 0; i < static_cast<std::size_t>(mps.bond_dim()); ++i) {
      const cplx a = mps.diag0()[i];
      const cplx b = mps.diag1()[i];
      const double r = std::hypot(std::abs(a), std::abs(b));
      if (r == 0.0) continue;
      p[d + i] = n_ * std::log(r);
      if (gauge_ == Gauge::full_complex) {
        p[i] = std::atan2(std::abs(b), std::abs(a));
        p[2 * d + i] = std::arg(a);
        p[3 * d + i] = std::arg(b);
      } else {
        const double ar = gauge_ == Gauge::i_power_real ? (a / kI).real() : a.real();
        p[i] = std::atan2(b.real(), ar);
      }
    }
    return p;
  }

  // a_d = cos(theta_d), b_d = sin(theta_d) with theta spread over [0, pi/2]:
  // the N00N state for D = 2, the balanced product state for D = 1.
  std::vector<double> extremes_start() const {
    std::vector<cplx> a(static_cast<std::size_t>(d_));
    std::vector<cplx> b(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
      const double theta = d_ == 1 ? std::numbers::pi / 4 : std::numbers::pi / 2 * i / (d_ - 1);
      const bool last = d_ > 1 && i == d_ - 1;
      a[static_cast<std::size_t>(i)] = last ? 0.0 : std::cos(theta);
      b[static_cast<std::size_t>(i)] = last ? 1.0 : std::sin(theta);
      if (gauge_ == Gauge::i_power_real) a[static_cast<std::size_t>(i)] *= kI;
    }
    return from_mps(DiagonalMPS(n_, std::move(a), std::move(b)));
  }

  std::vector<double> equal_start() const {
    std::vector<cplx> a(static_cast<std::size_t>(d_), gauge_ == Gauge::i_power_real ? kI : cplx(1.0));
    std::vector<cplx> b(static_cast<std::size_t>(d_), 1.0);
    return from_mps(DiagonalMPS(n_, std::move(a), std::move(b)));
  }

  // Diagonal entries drawn uniformly per real degree of freedom.
  std::vector<double> random_start(std::mt19937_64& rng, double spread) const {
    std::uniform_real_distribution<double> u(-spread, spread);
    const auto d = static_cast<std::size_t>(d_);
    std::vector<cplx> a(d);
    std::vector<cplx> b(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (gauge_ == Gauge::full_complex) {
        a[i] = {u(rng), u(rng)};
        b[i] = {u(rng), u(rng)};
      } else {
        a[i] = u(rng);
        b[i] = u(rng);
        if (gauge_ == Gauge::i_power_real) a[i] *= kI;
      }
    }
    return from_mps(DiagonalMPS(n_, std::move(a), std::move(b)));
  }

 private:
  static constexpr double kDeadWeight = -1e4;

  int n_;
  int d_;
  Gauge gauge_;
};

OptimizationResult pick_best(std::vector<StartReport> reports, const std::vector<std::vector<double>>& points,
                             const MpsParameterization& param, const MeritEvaluator& eval,
                             const OptimizerOptions& opts) {
  std::size_t best = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].degenerate) continue;
    if (best == reports.size() || better(reports[i].value, reports[best].value, eval.objective().kind)) best = i;
  }
  if (best == reports.size())
    throw OptimizationFailed("optimize_mps: every start ended in a degenerate MPS or undefined objective",
                             std::move(reports));

  const DiagonalMPS raw = param.to_mps(points[best]);
  const SymmetricState state = reported_state(mps_amplitudes(raw), eval.objective());
  OptimizationResult res{canonical_form(raw), raw, state, 0.0, 0.0, reports[best].converged,
                         reports[best].iterations, opts.seed, std::move(reports)};
  res.objective_value = eval.merit(state);
  res.delta_phi = delta_phi_from_merit(res.objective_value, eval.objective().kind);
  return res;
}

// ---------------------------------------------------------------------------
// Direct optimization, QFI: concave maximization on the probability simplex.

// Euclidean projection onto {x >= 0, sum x = 1}.
void project_to_simplex(std::vector<double>& x) {
  std::vector<double> s(x);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cumulative += s[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) shift = t;
  }
  for (double& v : x) v = std::max(0.0, v - shift);
}

struct SpgOutcome {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trajectory;
};

// Spectral projected gradient ascent with a nonmonotone line search. Stops
// when the Frank-Wolfe gap max_m g_m - <g, x>, an upper bound on the distance
// to the optimum, drops below rel_tol * F~.
SpgOutcome maximize_qfi_on_simplex(std::vector<double> x, const LossTable& table, const OptimizerOptions& opts) {
  const std::size_t dim = x.size();
  project_to_simplex(x);
  std::vector<double> g(dim);
  std::vector<double> trial(dim);
  std::vector<double> g_trial(dim);
  std::vector<double> dir(dim);

  SpgOutcome out;
  double value = approx_qfi_with_gradient(x, table, g);
  std::vector<double> history{value};
  constexpr std::size_t kMemory = 10;
  double step = 1.0 / std::max(1.0, *std::max_element(g.begin(), g.end()));
  const double gap_tol = std::max(opts.rel_tol, 1e-14);

  for (int it = 0; it < opts.max_iters; ++it) {
    const double gap = *std::max_element(g.begin(), g.end()) - std::inner_product(g.begin(), g.end(), x.begin(), 0.0);
    if (gap <= gap_tol * std::max(value, 1e-300)) {
      out.converged = true;
      break;
    }
    for (std::size_t i = 0; i < dim; ++i) dir[i] = x[i] + step * g[i];
    project_to_simplex(dir);
    double slope = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      dir[i] -= x[i];
      slope += g[i] * dir[i];
    }
    if (slope <= 0.0) {
      out.converged = true;
      break;
    }
    const double reference = *std::min_element(history.begin(), history.end());
    double t = 1.0;
    double trial_value = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60 && !accepted; ++bt, t *= 0.5) {
      for (std::size_t i = 0; i < dim; ++i) trial[i] = std::max(0.0, x[i] + t * dir[i]);
      trial_value = approx_qfi_with_gradient(trial, table, g_trial);
      // Nonmonotone Armijo test against the worst of the recent values.
      accepted = trial_value >= reference + 1e-4 * t * slope;
    }
    if (!accepted) break;
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double s = trial[i] - x[i];
      const double y = g_trial[i] - g[i];
      ss += s * s;
      sy += s * y;
    }
    step = sy < 0.0 ? std::clamp(ss / -sy, 1e-12, 1e12) : 1e12;
    const double previous = value;
    x.swap(trial);
    g.swap(g_trial);
    value = trial_value;
    ++out.iterations;
    if (opts.record_trajectories) out.trajectory.push_back(value);
    history.push_back(value);
    if (history.size() > kMemory) history.erase(history.begin());
    if (ss == 0.0 && value <= previous) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  out.value = value;
  return out;
}

OptimizationResult direct_qfi(int n_probes, const ObjectiveSpec& objective, const OptimizerOptions& opts) {
  const MeritEvaluator eval(n_probes, objective);
  const auto dim = static_cast<std::size_t>(n_probes) + 1;

  // The objective is concave on the simplex, so every local maximum is
  // global and a single start from the uniform distribution suffices.
  std::vector<std::vector<double>> starts;
  starts.emplace_back(dim, 1.0 / static_cast<double>(dim));

  std::vector<SpgOutcome> outcomes(starts.size());
  parallel_for(starts.size(), opts.workers,
               [&](std::size_t i) { outcomes[i] = maximize_qfi_on_simplex(starts[i], eval.table(), opts); });

  std::vector<StartReport> reports;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    reports.push_back({static_cast<int>(i), outcomes[i].value, outcomes[i].iterations, outcomes[i].converged, false,
                       std::move(outcomes[i].trajectory)});
    if (outcomes[i].value > outcomes[best].value) best = i;
  }
  std::vector<cplx> amps(dim);
  for (std::size_t n = 0; n < dim; ++n) amps[n] = std::sqrt(std::max(0.0, outcomes[best].x[n]));
  const SymmetricState state = normalize(amps);
  OptimizationResult res{std::nullopt, std::nullopt, state, 0.0, 0.0, reports[best].converged,
                         reports[best].iterations, opts.seed, std::move(reports)};
  res.objective_value = eval.merit(state);
  res.delta_phi = delta_phi_from_merit(res.objective_value, ObjectiveKind::approx_qfi_max);
  return res;
}

// ---------------------------------------------------------------------------
// Direct optimization, Ramsey. With alpha_n = i^n r_n the moments become real
// quadratic forms: Var(Jx) = r.Q r and <Jy> = r.Y r. Minimizing
// (r.K r) / (r.Y r)^2 with K = Q + (1-eta)/eta N/4 picks a point on the lower
// boundary of the joint numerical range, which is the ground state of
// K - lambda Y for some lambda > 0.

struct RamseyForms {
  Eigen::MatrixXd k;
  Eigen::MatrixXd y;
};

RamseyForms ramsey_forms(int n_probes, double eta) {
  const int dim = n_probes + 1;
  auto ladder = [&](int n) {
    return (n < 0 || n >= n_probes) ? 0.0 : std::sqrt(static_cast<double>(n + 1) * (n_probes - n));
  };
  RamseyForms f{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};
  const double loss = (1.0 - eta) / eta * n_probes / 4.0;
  for (int n = 0; n < dim; ++n) {
    f.k(n, n) = 0.25 * (ladder(n - 1) * ladder(n - 1) + ladder(n) * ladder(n)) + loss;
    if (n + 1 < dim) f.y(n, n + 1) = f.y(n + 1, n) = 0.5 * ladder(n);
    if (n + 2 < dim) f.k(n, n + 2) = f.k(n + 2, n) = -0.25 * ladder(n) * ladder(n + 1);
  }
  return f;
}

struct LambdaPoint {
  double lambda = 0.0;
  double value = kInf;  // (r.K r) / (r.Y r)^2
  Eigen::VectorXd r;
};

LambdaPoint ground_state_point(const RamseyForms& f, double lambda) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.k - lambda * f.y);
  LambdaPoint p{lambda, kInf, eig.eigenvectors().col(0)};
  const double u = p.r.dot(f.k * p.r);
  const double v = p.r.dot(f.y * p.r);
  if (v > 1e-12) p.value = u / (v * v);
  return p;
}

OptimizationResult direct_ramsey(int n_probes, const ObjectiveSpec& objective, const OptimizerOptions& opts) {
  const MeritEvaluator eval(n_probes, objective);
  const RamseyForms forms = ramsey_forms(n_probes, objective.eta);
  const double kappa = (1.0 - objective.eta) / objective.eta;

  // The optimal multiplier equals 2 (r.K r)/(r.Y r) and lies in [kappa, 1/eta].
  const double lo = std::log(std::max(kappa, 1e-8) / 4.0);
  const double hi = std::log(4.0 / objective.eta);
  constexpr int kGrid = 48;
  std::vector<LambdaPoint> grid;
  grid.reserve(kGrid);
  for (int i = 0; i < kGrid; ++i) grid.push_back(ground_state_point(forms, std::exp(lo + (hi - lo) * i / (kGrid - 1))));
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i].value < grid[best].value) best = i;
  LambdaPoint incumbent = grid[best];
  int iterations = kGrid;

  // Golden-section refinement in log(lambda) between the grid neighbours.
  double a = std::log(grid[best == 0 ? 0 : best - 1].lambda);
  double b = std::log(grid[std::min(best + 1, grid.size() - 1)].lambda);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  LambdaPoint pc = ground_state_point(forms, std::exp(c));
  LambdaPoint pd = ground_state_point(forms, std::exp(d));
  for (int i = 0; i < 80 && b - a > 1e-13; ++i, ++iterations) {
    if (pc.value < pd.value) {
      b = d;
      d = c;
      pd = pc;
      c = b - invphi * (b - a);
      pc = ground_state_point(forms, std::exp(c));
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + invphi * (b - a);
      pd = ground_state_point(forms, std::exp(d));
    }
    for (const LambdaPoint* p : {&pc, &pd})
      if (p->value < incumbent.value) incumbent = *p;
  }
  // Stationarity fixed point lambda = 2 u / v.
  for (int i = 0; i < 50; ++i, ++iterations) {
    const double u = incumbent.r.dot(forms.k * incumbent.r);
    const double v = incumbent.r.dot(forms.y * incumbent.r);
    if (!(v > 0.0)) break;
    const LambdaPoint next = ground_state_point(forms, 2.0 * u / v);
    if (!(next.value < incumbent.value * (1.0 - 1e-15))) break;
    incumbent = next;
  }
  if (!std::isfinite(incumbent.value))
    throw OptimizationFailed("optimize_direct: no state with nonzero <Jy> found", {});

  static constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<cplx> amps(static_cast<std::size_t>(n_probes) + 1);
  for (int n = 0; n <= n_probes; ++n) amps[static_cast<std::size_t>(n)] = kIPowers[n % 4] * incumbent.r(n);
  SymmetricState state = normalize(amps);
  std::vector<StartReport> reports{{0, std::sqrt(incumbent.value), iterations, true, false, {}}};

  if (objective.gauge == Gauge::full_complex) {
    // Polish over unrestricted amplitudes, starting from the gauge optimum.
    std::vector<double> x0(2 * amps.size());
    for (std::size_t n = 0; n < amps.size(); ++n) {
      x0[2 * n] = state[static_cast<int>(n)].real();
      x0[2 * n + 1] = state[static_cast<int>(n)].imag();
    }
    auto f = [&](std::span<const double> p) {
      std::vector<cplx> z(amps.size());
      for (std::size_t n = 0; n < z.size(); ++n) z[n] = {p[2 * n], p[2 * n + 1]};
      try {
        return eval.loss(normalize(z));
      } catch (const DegenerateStateError&) {
        return kInf;
      }
    };
    NelderMeadOptions nm{opts.max_iters, opts.rel_tol, 0.05, 8, opts.record_trajectories};
    const NelderMeadResult polished = nelder_mead_minimize(f, x0, nm);
    if (polished.value < eval.loss(state)) {
      std::vector<cplx> z(amps.size());
      for (std::size_t n = 0; n < z.size(); ++n) z[n] = {polished.x[2 * n], polished.x[2 * n + 1]};
      state = normalize(z);
    }
    reports.push_back({1, polished.value, polished.iterations, polished.converged, false, polished.trajectory});
  }

  OptimizationResult res{std::nullopt, std::nullopt, state, 0.0, 0.0, true, iterations, opts.seed, std::move(reports)};
  res.objective_value = eval.merit(state);
  res.delta_phi = res.objective_value;
  return res;
}

}  // namespace

void ObjectiveSpec::validate() const {
  LossChannel::checked(eta);
  if (kind == ObjectiveKind::approx_qfi_max && gauge != Gauge::real_nonneg)
    throw DomainError("approx_qfi_max is phase-blind and requires the real_nonneg gauge");
  if (kind == ObjectiveKind::ramsey_min) {
    if (eta == 0.0) throw DomainError("ramsey_min requires eta > 0");
    if (gauge == Gauge::real_nonneg) throw DomainError("ramsey_min has no signal for real amplitudes (<Jy> = 0)");
  }
}

void OptimizerOptions::validate() const {
  if (starts < 1) throw DomainError("optimizer: starts must be >= 1");
  if (!(rel_tol > 0.0)) throw DomainError("optimizer: rel_tol must be positive");
  if (max_iters < 1) throw DomainError("optimizer: max_iters must be >= 1");
  if (!(init_spread > 0.0)) throw DomainError("optimizer: init_spread must be positive");
}

double figure_of_merit(const SymmetricState& state, const ObjectiveSpec& objective) {
  objective.validate();
  return objective.kind == ObjectiveKind::approx_qfi_max ? approx_qfi(state, objective.eta)
                                                         : ramsey_precision(state, objective.eta);
}

double delta_phi_from_merit(double merit, ObjectiveKind kind) {
  return kind == ObjectiveKind::approx_qfi_max ? precision_from_qfi(merit) : merit;
}

bool better(double a, double b, ObjectiveKind kind) { return kind == ObjectiveKind::approx_qfi_max ? a > b : a < b; }

OptimizationResult optimize_mps(int n_probes, int bond_dim, const ObjectiveSpec& objective,
                                const OptimizerOptions& opts) {
  if (n_probes < 1 || bond_dim < 1) throw DomainError("optimize_mps: need N >= 1 and D >= 1");
  objective.validate();
  opts.validate();
  const MeritEvaluator eval(n_probes, objective);
  const MpsParameterization param(n_probes, bond_dim, objective.gauge);

  std::vector<std::vector<double>> points;
  points.push_back(param.equal_start());
  points.push_back(param.extremes_start());
  for (const auto& w : opts.warm_starts) points.push_back(param.from_mps(w));
  const std::size_t first_random = points.size();
  points.resize(first_random + static_cast<std::size_t>(opts.starts));

  std::vector<StartReport> reports(points.size());
  parallel_for(points.size(), opts.workers, [&](std::size_t i) {
    if (i >= first_random) {
      auto rng = stream_for(opts.seed, i);
      points[i] = param.random_start(rng, opts.init_spread);
    }
    auto f = [&](std::span<const double> p) {
      try {
        return eval.loss(mps_amplitudes(param.to_mps(p)));
      } catch (const DegenerateStateError&) {
        return kInf;
      }
    };
    const NelderMeadOptions nm{opts.max_iters, opts.rel_tol, 0.25, 8, opts.record_trajectories};
    NelderMeadResult r = nelder_mead_minimize(f, points[i], nm);
    reports[i] = {static_cast<int>(i), eval.merit_from_loss(r.value), r.iterations, r.converged,
                  !std::isfinite(r.value), std::move(r.trajectory)};
    if (opts.record_trajectories)
      for (double& v : reports[i].trajectory) v = eval.merit_from_loss(v);
    points[i] = std::move(r.x);
  });
  return pick_best(std::move(reports), points, param, eval, opts);
}

OptimizationResult optimize_direct(int n_probes, const ObjectiveSpec& objective, const OptimizerOptions& opts) {
  if (n_probes < 1) throw DomainError("optimize_direct: need N >= 1");
  objective.validate();
  opts.validate();
  if (n_probes > opts.direct_max_probes)
    throw CapabilityError("optimize_direct: N=" + std::to_string(n_probes) + " exceeds direct cap " +
                          std::to_string(opts.direct_max_probes));
  return objective.kind == ObjectiveKind::approx_qfi_max ? direct_qfi(n_probes, objective, opts)
                                                         : direct_ramsey(n_probes, objective, opts);
}

std::vector<OptimizationResult> optimize_mps_ladder(int n_probes, int max_bond_dim, const ObjectiveSpec& objective,
                                                    const OptimizerOptions& opts) {
  std::vector<OptimizationResult> out;
  OptimizerOptions step = opts;
  for (int d = 1; d <= max_bond_dim; ++d) {
    step.warm_starts = opts.warm_starts;
    if (!out.empty()) step.warm_starts.push_back(*out.back().raw_mps);
    out.push_back(optimize_mps(n_probes, d, objective, step));
  }
  return out;
}

BondDimensionReport minimal_bond_dimension(int n_probes, const ObjectiveSpec& objective, double threshold,
                                           const OptimizerOptions& opts, int d_cap) {
  if (!(threshold >= 0.0)) throw DomainError("minimal_bond_dimension: threshold must be >= 0");
  if (d_cap < 1) throw DomainError("minimal_bond_dimension: d_cap must be >= 1");
  BondDimensionReport rep;
  rep.direct_delta_phi = optimize_direct(n_probes, objective, opts).delta_phi;
  OptimizerOptions step = opts;
  std::optional<DiagonalMPS> previous;
  for (int d = 1; d <= d_cap; ++d) {
    step.warm_starts = opts.warm_starts;
    if (previous) step.warm_starts.push_back(*previous);
    const OptimizationResult r = optimize_mps(n_probes, d, objective, step);
    previous = r.raw_mps;
    rep.mps_delta_phi.push_back(r.delta_phi);
    if ((r.delta_phi - rep.direct_delta_phi) / rep.direct_delta_phi <= threshold) {
      rep.minimal_bond_dim = d;
      return rep;
    }
  }
  rep.cap_exceeded = true;
  return rep;
}

}  // namespace mpsmetro
