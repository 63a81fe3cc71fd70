#include "mpsmetro/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mpsmetro/errors.hpp"

namespace mpsmetro {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// k * ln|z| and k * arg z with 0^0 = 1.
struct LogPower {
  double log_mag;
  double phase;
};

LogPower log_power(cplx z, int k) {
  if (k == 0) return {0.0, 0.0};
  if (z == cplx(0.0)) return {kNegInf, 0.0};
  return {k * std::log(std::abs(z)), std::fmod(k * std::arg(z), 2.0 * std::numbers::pi)};
}

}  // namespace

DiagonalMPS::DiagonalMPS(int n_probes, std::vector<cplx> diag0, std::vector<cplx> diag1)
    : n_(n_probes), a_(std::move(diag0)), b_(std::move(diag1)) {
  if (n_ < 1) throw DomainError("DiagonalMPS: need N >= 1");
  if (a_.empty()) throw DomainError("DiagonalMPS: bond dimension must be >= 1");
  if (a_.size() != b_.size()) throw DomainError("DiagonalMPS: diagonals must have equal length");
}

DiagonalMPS DiagonalMPS::with_pair(cplx a, cplx b) const {
  auto a2 = a_;
  auto b2 = b_;
  a2.push_back(a);
  b2.push_back(b);
  return {n_, std::move(a2), std::move(b2)};
}

SymmetricState mps_amplitudes(const DiagonalMPS& mps) {
  const int big_n = mps.n_probes();
  const int bond = mps.bond_dim();
  const auto dim = static_cast<std::size_t>(big_n) + 1;

  // Per n: log-magnitude and unit-scale mantissa of sum_d a_d^n b_d^(N-n).
  std::vector<double> log_scale(dim, kNegInf);
  std::vector<cplx> mantissa(dim, 0.0);
  std::vector<LogPower> terms(static_cast<std::size_t>(bond));
  for (int n = 0; n <= big_n; ++n) {
    double peak = kNegInf;
    for (int d = 0; d < bond; ++d) {
      const LogPower pa = log_power(mps.diag0()[static_cast<std::size_t>(d)], n);
      const LogPower pb = log_power(mps.diag1()[static_cast<std::size_t>(d)], big_n - n);
      terms[static_cast<std::size_t>(d)] = {pa.log_mag + pb.log_mag, pa.phase + pb.phase};
      peak = std::max(peak, terms[static_cast<std::size_t>(d)].log_mag);
    }
    if (peak == kNegInf) continue;
    cplx acc = 0.0;
    for (const auto& t : terms) {
      if (t.log_mag == kNegInf) continue;
      acc += std::polar(std::exp(t.log_mag - peak), t.phase);
    }
    // Cancellation down to roundoff of the largest term counts as zero.
    const double mag = std::abs(acc);
    if (mag <= 4.0 * bond * std::numeric_limits<double>::epsilon()) continue;
    log_scale[static_cast<std::size_t>(n)] = peak + std::log(mag) + 0.5 * log_binomial(big_n, n);
    mantissa[static_cast<std::size_t>(n)] = acc / mag;
  }

  const double top = *std::max_element(log_scale.begin(), log_scale.end());
  if (top == kNegInf || !std::isfinite(top)) throw DegenerateStateError("mps_amplitudes: MPS induces the zero state");
  std::vector<cplx> raw(dim);
  for (std::size_t n = 0; n < dim; ++n)
    raw[n] = log_scale[n] == kNegInf ? cplx(0.0) : mantissa[n] * std::exp(log_scale[n] - top);
  return normalize(raw);
}

DiagonalMPS canonical_form(const DiagonalMPS& mps) {
  // Validates non-degeneracy.
  (void)mps_amplitudes(mps);

  const auto bond = static_cast<std::size_t>(mps.bond_dim());
  std::vector<std::size_t> order(bond);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& a = mps.diag0();
  const auto& b = mps.diag1();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (std::abs(a[i]) != std::abs(a[j])) return std::abs(a[i]) > std::abs(a[j]);
    return std::abs(b[i]) > std::abs(b[j]);
  });

  double scale = 0.0;
  for (std::size_t d = 0; d < bond; ++d) scale = std::max({scale, std::abs(a[d]), std::abs(b[d])});

  cplx anchor = 0.0;
  for (std::size_t i : order)
    if (a[i] != cplx(0.0)) {
      anchor = a[i];
      break;
    }
  if (anchor == cplx(0.0))
    for (std::size_t i : order)
      if (b[i] != cplx(0.0)) {
        anchor = b[i];
        break;
      }
  const cplx rotate = std::polar(1.0 / scale, -std::arg(anchor));

  std::vector<cplx> a2;
  std::vector<cplx> b2;
  a2.reserve(bond);
  b2.reserve(bond);
  for (std::size_t i : order) {
    a2.push_back(a[i] * rotate);
    b2.push_back(b[i] * rotate);
  }
  // The phase rotation leaves rounding residue in components that should vanish.
  for (auto* diag : {&a2, &b2})
    for (auto& z : *diag) {
      const double tiny = 1e-15 * std::abs(z);
      if (std::abs(z.imag()) <= tiny) z = {z.real(), 0.0};
      if (std::abs(z.real()) <= tiny) z = {0.0, z.imag()};
    }
  return {mps.n_probes(), std::move(a2), std::move(b2)};
}

double complementarity_gap(const DiagonalMPS& mps) {
  const DiagonalMPS c = canonical_form(mps);
  double max_a = 0.0;
  double max_b = 0.0;
  for (int d = 0; d < c.bond_dim(); ++d) {
    max_a = std::max(max_a, std::abs(c.diag0()[static_cast<std::size_t>(d)]));
    max_b = std::max(max_b, std::abs(c.diag1()[static_cast<std::size_t>(d)]));
  }
  if (max_a == 0.0 || max_b == 0.0) return 1.0;
  const auto bond = static_cast<std::size_t>(c.bond_dim());
  double gap = 0.0;
  for (std::size_t d = 0; d < bond; ++d) {
    const double a_rev = std::abs(c.diag0()[bond - 1 - d]) / max_a;
    gap = std::max(gap, std::abs(a_rev - std::abs(c.diag1()[d]) / max_b));
  }
  return gap;
}

void write_mps(std::ostream& os, const DiagonalMPS& mps) {
  char buf[160];
  os << mps.n_probes() << ' ' << mps.bond_dim() << '\n';
  for (int d = 0; d < mps.bond_dim(); ++d) {
    const cplx a = mps.diag0()[static_cast<std::size_t>(d)];
    const cplx b = mps.diag1()[static_cast<std::size_t>(d)];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", a.real(), a.imag(), b.real(), b.imag());
    os << buf;
  }
}

DiagonalMPS read_mps(std::istream& is) {
  int big_n = 0;
  int bond = 0;
  if (!(is >> big_n >> bond) || bond < 1) throw DomainError("read_mps: malformed header");
  std::vector<cplx> a(static_cast<std::size_t>(bond));
  std::vector<cplx> b(static_cast<std::size_t>(bond));
  for (int d = 0; d < bond; ++d) {
    double ar = 0, ai = 0, br = 0, bi = 0;
    if (!(is >> ar >> ai >> br >> bi)) throw DomainError("read_mps: truncated record");
    a[static_cast<std::size_t>(d)] = {ar, ai};
    b[static_cast<std::size_t>(d)] = {br, bi};
  }
  return {big_n, std::move(a), std::move(b)};
}

std::string to_text(const DiagonalMPS& mps) {
  std::ostringstream os;
  write_mps(os, mps);
  return os.str();
}

}  // namespace mpsmetro
