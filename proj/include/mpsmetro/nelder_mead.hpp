#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mpsmetro {

struct NelderMeadOptions {
  int max_iters = 20000;
  // Converged once a freshly rebuilt simplex fails to improve the best value
  // by more than rel_tol (relative).
  double rel_tol = 1e-10;
  double initial_step = 0.25;
  int max_restarts = 8;
  bool record_trajectory = false;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  // Best value after each iteration, when requested.
  std::vector<double> trajectory;
};

using Objective = std::function<double(std::span<const double>)>;

// Minimizes f with the adaptive-parameter Nelder-Mead simplex, restarting from
// the incumbent until a rebuilt simplex no longer improves it. Non-finite
// objective values are treated as +infinity.
NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts);

}  // namespace mpsmetro
