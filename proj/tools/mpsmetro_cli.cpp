// Command-line front end: single-point optimization, sweeps, minimal bond
// dimension search and the internal validation suite.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/optimize.hpp"
#include "mpsmetro/parallel.hpp"
#include "mpsmetro/qfi.hpp"
#include "mpsmetro/sweep.hpp"
#include "mpsmetro/validation.hpp"

using namespace mpsmetro;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct CommonFlags {
  std::string objective = "qfi";
  std::string gauge;
  int starts = 16;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  int max_iters = 20000;
  int workers = 0;

  void attach(CLI::App* app) {
    app->add_option("--objective", objective, "Figure of merit: qfi or ramsey")
        ->check(CLI::IsMember({"qfi", "ramsey"}));
    app->add_option("--gauge", gauge, "Amplitude gauge: real_nonneg, i_power_real or full_complex");
    app->add_option("--starts", starts, "Random starts per optimization")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Base random seed");
    app->add_option("--tol", tol, "Relative convergence tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", max_iters, "Iteration cap per start")->check(CLI::PositiveNumber);
    app->add_option("--workers", workers, "Worker threads (default: MPSMETRO_WORKERS or hardware)");
  }

  int worker_count() const { return workers > 0 ? workers : default_workers(); }

  OptimizerOptions options() const {
    OptimizerOptions o;
    o.starts = starts;
    o.seed = seed;
    o.rel_tol = tol;
    o.max_iters = max_iters;
    o.workers = worker_count();
    return o;
  }

  ObjectiveSpec objective_spec(double eta) const {
    ObjectiveSpec s = parse_objective(objective) == ObjectiveKind::approx_qfi_max ? ObjectiveSpec::qfi(eta)
                                                                                   : ObjectiveSpec::ramsey(eta);
    if (!gauge.empty()) s.gauge = parse_gauge(gauge);
    return s;
  }
};

void print_result(const OptimizationResult& r, int n, int d, const ObjectiveSpec& obj, bool oracle) {
  std::printf("N              %d\n", n);
  std::printf("D              %s\n", d == 0 ? "direct" : std::to_string(d).c_str());
  std::printf("eta            %.17g\n", obj.eta);
  std::printf("objective      %s (%s)\n", to_string(obj.kind).c_str(), to_string(obj.gauge).c_str());
  std::printf("objective_value %.12g\n", r.objective_value);
  std::printf("delta_phi      %.12g\n", r.delta_phi);
  std::printf("shot_noise     %.12g\n", 1.0 / std::sqrt(obj.eta * n));
  std::printf("asymptotic     %.12g\n", std::sqrt((1.0 - obj.eta) / (obj.eta * n)));
  std::printf("converged      %s\n", r.converged ? "true" : "false");
  std::printf("iterations     %d\n", r.iterations);
  std::printf("seed           %llu\n", static_cast<unsigned long long>(r.seed));
  if (oracle) {
    try {
      const double ex = exact_qfi(r.state, obj.eta);
      std::printf("exact_qfi      %.12g\n", ex);
      std::printf("approx_qfi     %.12g\n", approx_qfi(r.state, obj.eta));
    } catch (const CapabilityError& e) {
      std::printf("exact_qfi      skipped (%s)\n", e.what());
    }
  }
  if (r.mps) {
    std::printf("complementarity_gap %.6g\n", complementarity_gap(*r.mps));
    std::printf("mps (canonical):\n%s", to_text(*r.mps).c_str());
  }
}

int cmd_optimize(int n, int d, double eta, const CommonFlags& f, const std::string& oracle, const std::string& out,
                 const std::string& format, bool dump_states) {
  const ObjectiveSpec obj = f.objective_spec(eta);
  const OptimizerOptions opts = f.options();
  const OptimizationResult r = d == 0 ? optimize_direct(n, obj, opts) : optimize_mps(n, d, obj, opts);
  print_result(r, n, d, obj, oracle == "on");
  if (!out.empty()) {
    SweepRecord rec;
    rec.n = n;
    rec.d = d;
    rec.eta = eta;
    rec.objective = obj.kind;
    rec.objective_value = r.objective_value;
    rec.delta_phi = r.delta_phi;
    rec.shot_noise_bound = 1.0 / std::sqrt(eta * n);
    rec.asymptotic_bound = std::sqrt((1.0 - eta) / (eta * n));
    rec.converged = r.converged;
    rec.iterations = r.iterations;
    rec.seed = r.seed;
    rec.mps = r.mps;
    SweepSpec spec;
    spec.output_path = out;
    spec.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    write_records(spec, {rec}, dump_states);
  }
  return 0;
}

int cmd_sweep(SweepSpec spec, int workers, bool dump_states) {
  if (spec.output_path.empty()) {
    const auto records = run_sweep(spec, workers);
    if (spec.format == OutputFormat::csv)
      write_csv(std::cout, records);
    else
      write_json(std::cout, records);
    return 0;
  }
  const auto records = run_sweep(spec, workers);
  write_records(spec, records, dump_states);
  std::fprintf(stderr, "wrote %zu records to %s\n", records.size(), spec.output_path.c_str());
  return 0;
}

int cmd_min_bond_dim(int n, double eta, double threshold, int d_cap, const CommonFlags& f) {
  const ObjectiveSpec obj = f.objective_spec(eta);
  const BondDimensionReport rep = minimal_bond_dimension(n, obj, threshold, f.options(), d_cap);
  std::printf("N %d eta %.17g objective %s threshold %g\n", n, eta, to_string(obj.kind).c_str(), threshold);
  std::printf("direct delta_phi %.12g\n", rep.direct_delta_phi);
  for (std::size_t i = 0; i < rep.mps_delta_phi.size(); ++i) {
    const double rel = (rep.mps_delta_phi[i] - rep.direct_delta_phi) / rep.direct_delta_phi;
    std::printf("D=%zu delta_phi %.12g rel_excess %.3e\n", i + 1, rep.mps_delta_phi[i], rel);
  }
  if (rep.minimal_bond_dim)
    std::printf("minimal_bond_dim %d\n", *rep.minimal_bond_dim);
  else
    std::printf("minimal_bond_dim not reached by D=%d (cap exceeded)\n", d_cap);
  return 0;
}

int cmd_validate(std::uint64_t seed, bool thorough) {
  const auto results = run_validation_suite(seed, thorough);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %s (%s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%zu checks, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal lossy-interferometry probe states over diagonal symmetric matrix product states"};
  app.require_subcommand(1);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Optimize one (N, D, eta) point; --d 0 runs the direct optimizer");
  int opt_n = 0;
  int opt_d = 1;
  double opt_eta = 1.0;
  std::string opt_oracle = "off";
  std::string opt_out;
  std::string opt_format = "csv";
  bool opt_dump = false;
  CommonFlags opt_flags;
  opt->add_option("--n", opt_n, "Number of probes")->required()->check(CLI::PositiveNumber);
  opt->add_option("--d", opt_d, "Bond dimension (0 = direct optimization)")->check(CLI::NonNegativeNumber);
  opt->add_option("--eta", opt_eta, "Transmissivity per probe")->check(CLI::Range(0.0, 1.0));
  opt->add_option("--oracle", opt_oracle, "Cross-check with the exact QFI when N is small")
      ->check(CLI::IsMember({"on", "off"}));
  opt->add_option("--out", opt_out, "Write the result as a one-row CSV/JSON file");
  opt->add_option("--format", opt_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  opt->add_flag("--dump-states", opt_dump, "Write the MPS next to --out");
  opt_flags.attach(opt);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Sweep over N, D, eta and objectives");
  std::string sw_config;
  std::vector<int> sw_n;
  std::vector<int> sw_d;
  std::vector<double> sw_eta;
  std::vector<std::string> sw_obj;
  std::string sw_direct;
  std::string sw_out;
  std::string sw_format;
  bool sw_no_timing = false;
  bool sw_dump = false;
  CommonFlags sw_flags;
  sw->add_option("--config", sw_config, "Key-value config file; flags override it");
  sw->add_option("--n", sw_n, "Probe numbers")->delimiter(',');
  sw->add_option("--d", sw_d, "Bond dimensions")->delimiter(',');
  sw->add_option("--eta", sw_eta, "Transmissivities")->delimiter(',');
  sw->add_option("--objectives", sw_obj, "qfi,ramsey")->delimiter(',');
  sw->add_option("--direct", sw_direct, "Include direct optimization rows (D = 0)")
      ->check(CLI::IsMember({"on", "off"}));
  sw->add_option("--out", sw_out, "Output path (stdout if omitted)");
  sw->add_option("--format", sw_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sw->add_flag("--no-timing", sw_no_timing, "Write wall_time_s as 0 so repeated runs are byte-identical");
  sw->add_flag("--dump-states", sw_dump, "Write optimal MPS records to <out>.states.txt");
  sw_flags.attach(sw);

  // min-bond-dim
  auto* mb = app.add_subcommand("min-bond-dim", "Smallest D within a relative threshold of the direct optimum");
  int mb_n = 0;
  double mb_eta = 0.9;
  double mb_threshold = 0.01;
  int mb_cap = 12;
  CommonFlags mb_flags;
  mb->add_option("--n", mb_n, "Number of probes")->required()->check(CLI::PositiveNumber);
  mb->add_option("--eta", mb_eta, "Transmissivity per probe")->check(CLI::Range(0.0, 1.0));
  mb->add_option("--threshold", mb_threshold, "Allowed relative excess of delta phi");
  mb->add_option("--d-cap", mb_cap, "Largest bond dimension tried")->check(CLI::PositiveNumber);
  mb_flags.attach(mb);

  // validate
  auto* va = app.add_subcommand("validate", "Run the internal property checks");
  std::uint64_t va_seed = 2024;
  bool va_thorough = false;
  va->add_option("--seed", va_seed, "Random seed");
  va->add_flag("--thorough", va_thorough, "Larger samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*opt) {
      // --objective qfi defaults to the real gauge; ramsey to i_power_real.
      return cmd_optimize(opt_n, opt_d, opt_eta, opt_flags, opt_oracle, opt_out, opt_format, opt_dump);
    }
    if (*sw) {
      SweepSpec spec;
      if (!sw_config.empty()) {
        std::ifstream in(sw_config);
        if (!in) throw DomainError("cannot read config '" + sw_config + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        spec = parse_sweep_config(ss.str());
      }
      if (!sw_n.empty()) spec.n_list = sw_n;
      if (!sw_d.empty()) spec.d_list = sw_d;
      if (!sw_eta.empty()) spec.eta_list = sw_eta;
      if (!sw_obj.empty()) {
        spec.objectives.clear();
        for (const auto& o : sw_obj) spec.objectives.push_back(parse_objective(o));
      }
      if (spec.objectives.empty()) spec.objectives.push_back(parse_objective(sw_flags.objective));
      if (!sw_direct.empty()) spec.include_direct = sw_direct == "on";
      if (!sw_out.empty()) spec.output_path = sw_out;
      if (!sw_format.empty()) spec.format = sw_format == "json" ? OutputFormat::json : OutputFormat::csv;
      if (sw_no_timing) spec.record_timing = false;
      if (!sw_flags.gauge.empty()) spec.ramsey_gauge = parse_gauge(sw_flags.gauge);
      auto set_if = [&](const char* name, auto& field, auto value) {
        if (sw->count(name) > 0) field = value;
      };
      set_if("--starts", spec.optimizer.starts, sw_flags.starts);
      set_if("--seed", spec.optimizer.seed, sw_flags.seed);
      set_if("--tol", spec.optimizer.rel_tol, sw_flags.tol);
      set_if("--max-iters", spec.optimizer.max_iters, sw_flags.max_iters);
      return cmd_sweep(spec, sw_flags.worker_count(), sw_dump);
    }
    if (*mb) return cmd_min_bond_dim(mb_n, mb_eta, mb_threshold, mb_cap, mb_flags);
    if (*va) return cmd_validate(va_seed, va_thorough);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
