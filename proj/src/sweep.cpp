#include "mpsmetro/sweep.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "mpsmetro/errors.hpp"
#include "mpsmetro/parallel.hpp"

namespace mpsmetro {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Shortest decimal that round-trips.
std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DomainError("config: bad value '" + s + "' for key '" + key + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw DomainError("config: bad boolean '" + s + "' for key '" + key + "'");
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

SweepRecord base_record(int n, int d, double eta, ObjectiveKind kind) {
  SweepRecord r;
  r.n = n;
  r.d = d;
  r.eta = eta;
  r.objective = kind;
  r.shot_noise_bound = 1.0 / std::sqrt(eta * n);
  r.asymptotic_bound = std::sqrt((1.0 - eta) / (eta * n));
  return r;
}

void fill_from(SweepRecord& rec, const OptimizationResult& res) {
  rec.objective_value = res.objective_value;
  rec.delta_phi = res.delta_phi;
  rec.converged = res.converged;
  rec.iterations = res.iterations;
  rec.mps = res.mps;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Group {
  int n;
  double eta;
  ObjectiveKind kind;
};

std::vector<SweepRecord> run_group(const SweepSpec& spec, const Group& g, const std::vector<int>& dims) {
  std::vector<SweepRecord> out;
  const ObjectiveSpec objective = g.kind == ObjectiveKind::approx_qfi_max ? ObjectiveSpec::qfi(g.eta)
                                                                           : ObjectiveSpec::ramsey(g.eta, spec.ramsey_gauge);
  OptimizerOptions opts = spec.optimizer;
  opts.workers = 1;

  if (spec.include_direct) {
    SweepRecord rec = base_record(g.n, 0, g.eta, g.kind);
    opts.seed = rec.seed = point_seed(spec.optimizer.seed, g.n, g.eta, g.kind, 0);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fill_from(rec, optimize_direct(g.n, objective, opts));
    } catch (const CapabilityError&) {
      rec.status = RecordStatus::capability_skipped;
      rec.objective_value = rec.delta_phi = std::nan("");
    }
    rec.wall_time_s = spec.record_timing ? seconds_since(t0) : 0.0;
    out.push_back(std::move(rec));
  }

  std::optional<DiagonalMPS> previous;
  for (int d : dims) {
    SweepRecord rec = base_record(g.n, d, g.eta, g.kind);
    opts.seed = rec.seed = point_seed(spec.optimizer.seed, g.n, g.eta, g.kind, d);
    opts.warm_starts = spec.optimizer.warm_starts;
    if (previous && previous->bond_dim() <= d) opts.warm_starts.push_back(*previous);
    const auto t0 = std::chrono::steady_clock::now();
    const OptimizationResult res = optimize_mps(g.n, d, objective, opts);
    rec.wall_time_s = spec.record_timing ? seconds_since(t0) : 0.0;
    fill_from(rec, res);
    previous = res.raw_mps;
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

void SweepSpec::validate() const {
  if (n_list.empty() || eta_list.empty() || objectives.empty())
    throw DomainError("sweep: n, eta and objective lists must be non-empty");
  if (d_list.empty() && !include_direct) throw DomainError("sweep: nothing to run (empty d list and direct off)");
  for (int n : n_list)
    if (n < 1) throw DomainError("sweep: N must be positive");
  for (int d : d_list)
    if (d < 1) throw DomainError("sweep: D must be positive");
  for (double e : eta_list)
    if (!(e > 0.0 && e <= 1.0)) throw DomainError("sweep: eta must lie in (0, 1]");
  optimizer.validate();
}

std::uint64_t point_seed(std::uint64_t global_seed, int n, double eta, ObjectiveKind kind, int d) {
  std::uint64_t h = splitmix64(global_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(eta));
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return splitmix64(h ^ static_cast<std::uint64_t>(d));
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers) {
  spec.validate();
  std::vector<int> dims = spec.d_list;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  std::vector<Group> groups;
  for (int n : spec.n_list)
    for (double eta : spec.eta_list)
      for (ObjectiveKind k : spec.objectives) groups.push_back({n, eta, k});

  std::vector<std::vector<SweepRecord>> parts(groups.size());
  parallel_for(groups.size(), workers, [&](std::size_t i) { parts[i] = run_group(spec, groups[i], dims); });

  std::vector<SweepRecord> out;
  for (auto& p : parts)
    for (auto& r : p) out.push_back(std::move(r));
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.n, a.d, a.eta, a.objective) < std::tie(b.n, b.d, b.eta, b.objective);
  });
  return out;
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.6f", r.wall_time_s);
    const char* conv = r.status == RecordStatus::capability_skipped ? "skipped" : (r.converged ? "true" : "false");
    os << r.n << ',' << r.d << ',' << fmt_double(r.eta) << ',' << to_string(r.objective) << ','
       << fmt_double(r.objective_value) << ',' << fmt_double(r.delta_phi) << ',' << fmt_double(r.shot_noise_bound)
       << ',' << fmt_double(r.asymptotic_bound) << ',' << conv << ',' << r.iterations << ',' << r.seed << ','
       << wall << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<SweepRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["N"] = r.n;
    j["D"] = r.d;
    j["eta"] = r.eta;
    j["objective"] = to_string(r.objective);
    const bool ok = r.status == RecordStatus::ok;
    j["objective_value"] = ok ? nlohmann::ordered_json(r.objective_value) : nlohmann::ordered_json(nullptr);
    j["delta_phi"] = ok ? nlohmann::ordered_json(r.delta_phi) : nlohmann::ordered_json(nullptr);
    j["shot_noise_bound"] = r.shot_noise_bound;
    j["asymptotic_bound"] = r.asymptotic_bound;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["seed"] = r.seed;
    j["wall_time_s"] = r.wall_time_s;
    j["status"] = ok ? "ok" : "capability_skipped";
    if (r.mps) j["mps"] = to_text(*r.mps);
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

void write_states(std::ostream& os, const std::vector<SweepRecord>& records) {
  for (const auto& r : records) {
    if (!r.mps) continue;
    os << "# N=" << r.n << " D=" << r.d << " eta=" << fmt_double(r.eta) << " objective=" << to_string(r.objective)
       << '\n';
    write_mps(os, *r.mps);
  }
}

void write_records(const SweepSpec& spec, const std::vector<SweepRecord>& records, bool dump_states) {
  std::ofstream os(spec.output_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file '" + spec.output_path + "'");
  if (spec.format == OutputFormat::csv)
    write_csv(os, records);
  else
    write_json(os, records);
  if (!os) throw std::runtime_error("write failed for '" + spec.output_path + "'");
  if (dump_states) {
    std::ofstream st(spec.output_path + ".states.txt", std::ios::binary);
    if (!st) throw std::runtime_error("cannot open state dump next to '" + spec.output_path + "'");
    write_states(st, records);
  }
}

SweepSpec parse_sweep_config(const std::string& text) {
  SweepSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto items = split_list(value);
    if (key == "n") {
      spec.n_list.clear();
      for (const auto& s : items) spec.n_list.push_back(parse_number<int>(key, s));
    } else if (key == "d") {
      spec.d_list.clear();
      for (const auto& s : items) spec.d_list.push_back(parse_number<int>(key, s));
    } else if (key == "eta") {
      spec.eta_list.clear();
      for (const auto& s : items) spec.eta_list.push_back(parse_number<double>(key, s));
    } else if (key == "objective") {
      spec.objectives.clear();
      for (const auto& s : items) spec.objectives.push_back(parse_objective(s));
    } else if (key == "direct") {
      spec.include_direct = parse_bool(key, value);
    } else if (key == "gauge") {
      spec.ramsey_gauge = parse_gauge(value);
    } else if (key == "starts") {
      spec.optimizer.starts = parse_number<int>(key, value);
    } else if (key == "max_iters") {
      spec.optimizer.max_iters = parse_number<int>(key, value);
    } else if (key == "tol") {
      spec.optimizer.rel_tol = parse_number<double>(key, value);
    } else if (key == "seed") {
      spec.optimizer.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "init_spread") {
      spec.optimizer.init_spread = parse_number<double>(key, value);
    } else if (key == "out") {
      spec.output_path = value;
    } else if (key == "format") {
      if (value == "csv")
        spec.format = OutputFormat::csv;
      else if (value == "json")
        spec.format = OutputFormat::json;
      else
        throw DomainError("config: unknown format '" + value + "'");
    } else if (key == "timing") {
      spec.record_timing = parse_bool(key, value);
    } else {
      throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

std::string serialize_sweep_config(const SweepSpec& spec) {
  std::ostringstream os;
  os << "n = " << join(spec.n_list, [](int v) { return std::to_string(v); }) << '\n';
  os << "d = " << join(spec.d_list, [](int v) { return std::to_string(v); }) << '\n';
  os << "eta = " << join(spec.eta_list, fmt_double) << '\n';
  os << "objective = " << join(spec.objectives, [](ObjectiveKind k) { return to_string(k); }) << '\n';
  os << "direct = " << (spec.include_direct ? "true" : "false") << '\n';
  os << "gauge = " << to_string(spec.ramsey_gauge) << '\n';
  os << "starts = " << spec.optimizer.starts << '\n';
  os << "max_iters = " << spec.optimizer.max_iters << '\n';
  os << "tol = " << fmt_double(spec.optimizer.rel_tol) << '\n';
  os << "seed = " << spec.optimizer.seed << '\n';
  os << "init_spread = " << fmt_double(spec.optimizer.init_spread) << '\n';
  if (!spec.output_path.empty()) os << "out = " << spec.output_path << '\n';
  os << "format = " << (spec.format == OutputFormat::csv ? "csv" : "json") << '\n';
  os << "timing = " << (spec.record_timing ? "true" : "false") << '\n';
  return os.str();
}

std::string to_string(ObjectiveKind kind) { return kind == ObjectiveKind::approx_qfi_max ? "qfi" : "ramsey"; }

ObjectiveKind parse_objective(const std::string& s) {
  if (s == "qfi" || s == "approx_qfi_max") return ObjectiveKind::approx_qfi_max;
  if (s == "ramsey" || s == "ramsey_min") return ObjectiveKind::ramsey_min;
  throw DomainError("unknown objective '" + s + "' (expected qfi or ramsey)");
}

std::string to_string(Gauge gauge) {
  switch (gauge) {
    case Gauge::real_nonneg:
      return "real_nonneg";
    case Gauge::i_power_real:
      return "i_power_real";
    case Gauge::full_complex:
      return "full_complex";
  }
  return "?";
}

Gauge parse_gauge(const std::string& s) {
  if (s == "real_nonneg" || s == "real") return Gauge::real_nonneg;
  if (s == "i_power_real" || s == "i_power") return Gauge::i_power_real;
  if (s == "full_complex" || s == "complex") return Gauge::full_complex;
  throw DomainError("unknown gauge '" + s + "'");
}

}  // namespace mpsmetro
