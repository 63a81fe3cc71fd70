#include "mpsmetro/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mpsmetro/errors.hpp"

namespace mpsmetro {

namespace {

using Point = std::vector<double>;

struct Vertex {
  Point x;
  double f;
};

bool spread_small(double best, double worst, double tol) {
  if (!std::isfinite(worst)) return false;
  return worst - best <= tol * std::max(std::abs(best), 1e-300);
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts) {
  if (x0.empty()) throw DomainError("nelder_mead_minimize: empty parameter vector");
  if (!(opts.rel_tol > 0.0)) throw DomainError("nelder_mead_minimize: rel_tol must be positive");
  const std::size_t dim = x0.size();
  const double nd = static_cast<double>(dim);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / nd;
  const double rho = 0.75 - 1.0 / (2.0 * nd);
  const double sigma = std::max(0.5, 1.0 - 1.0 / nd);

  NelderMeadResult res;
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  Vertex best{x0, eval(x0)};
  std::vector<Vertex> simplex(dim + 1);
  Point centroid(dim);
  Point trial(dim);

  auto build = [&](const Vertex& base) {
    simplex[0] = base;
    for (std::size_t i = 0; i < dim; ++i) {
      Point x = base.x;
      const double step = x[i] != 0.0 ? opts.initial_step * std::max(1.0, std::abs(x[i])) : opts.initial_step;
      x[i] += step;
      simplex[i + 1] = {x, eval(x)};
    }
  };
  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  auto along = [&](double t) {
    // centroid + t (centroid - worst)
    for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + t * (centroid[j] - simplex[dim].x[j]);
    return Vertex{trial, eval(trial)};
  };

  int restarts = 0;
  build(best);
  while (res.iterations < opts.max_iters) {
    order();
    if (spread_small(simplex[0].f, simplex[dim].f, opts.rel_tol)) {
      const double previous = best.f;
      if (simplex[0].f < best.f) best = simplex[0];
      const bool improved = std::isfinite(previous) && previous - best.f > opts.rel_tol * std::abs(best.f);
      if ((!improved && restarts > 0) || restarts >= opts.max_restarts) {
        res.converged = true;
        break;
      }
      ++restarts;
      build(best);
      continue;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i].x[j];
    for (double& c : centroid) c /= nd;

    const Vertex reflected = along(alpha);
    if (reflected.f < simplex[0].f) {
      const Vertex expanded = along(gamma);
      simplex[dim] = expanded.f < reflected.f ? expanded : reflected;
    } else if (reflected.f < simplex[dim - 1].f) {
      simplex[dim] = reflected;
    } else {
      const bool outside = reflected.f < simplex[dim].f;
      const Vertex contracted = along(outside ? alpha * rho : -rho);
      if (contracted.f < (outside ? reflected.f : simplex[dim].f)) {
        simplex[dim] = contracted;
      } else {
        for (std::size_t i = 1; i <= dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j)
            simplex[i].x[j] = simplex[0].x[j] + sigma * (simplex[i].x[j] - simplex[0].x[j]);
          simplex[i].f = eval(simplex[i].x);
        }
      }
    }
    ++res.iterations;
    if (opts.record_trajectory) {
      const double cur = std::min_element(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
                           return a.f < b.f;
                         })->f;
      res.trajectory.push_back(std::min(cur, best.f));
    }
  }

  order();
  if (simplex[0].f < best.f) best = simplex[0];
  res.x = std::move(best.x);
  res.value = best.f;
  return res;
}

}  // namespace mpsmetro
