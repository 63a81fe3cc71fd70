#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpsmetro/symstate.hpp"

namespace mpsmetro {

// Site-independent symmetric MPS with diagonal matrices
// A0 = diag(a_1..a_D), A1 = diag(b_1..b_D). Its Dicke amplitudes are
//   alpha_n ~ sqrt(C(N, n)) Tr(A0^n A1^(N-n)) = sqrt(C(N, n)) sum_d a_d^n b_d^(N-n).
class DiagonalMPS {
 public:
  // DomainError if N < 1, D < 1 or the diagonals differ in length.
  DiagonalMPS(int n_probes, std::vector<cplx> diag0, std::vector<cplx> diag1);

  int n_probes() const { return n_; }
  int bond_dim() const { return static_cast<int>(a_.size()); }
  const std::vector<cplx>& diag0() const { return a_; }
  const std::vector<cplx>& diag1() const { return b_; }

  // Copy with an extra (a, b) pair appended.
  DiagonalMPS with_pair(cplx a, cplx b) const;

  bool operator==(const DiagonalMPS&) const = default;

 private:
  int n_;
  std::vector<cplx> a_;
  std::vector<cplx> b_;
};

// Normalized Dicke amplitudes, evaluated per term in log-magnitude/phase
// form and combined after rescaling by the largest log-magnitude. A zero a_d
// contributes only at n = 0 and a zero b_d only at n = N (0^0 = 1).
// DegenerateStateError if every amplitude vanishes.
SymmetricState mps_amplitudes(const DiagonalMPS& mps);

// Amplitude-equivalent representative: pairs sorted by descending |a_d|
// (ties by descending |b_d|), all entries divided by a common positive scale
// so that the largest modulus is 1, and a common phase rotation that makes
// the leading nonzero a_d (or b_d if all a_d vanish) real and nonnegative.
// Both operations change the amplitudes by a global factor only.
DiagonalMPS canonical_form(const DiagonalMPS& mps);

// Diagnostic for the "same values, complementary order" structure of optimal
// diagonals: after canonical_form (pairs by descending |a_d|),
// max_d | |a_(D+1-d)| - |b_d| | with each diagonal scaled by its own largest
// modulus. Zero means equal values paired in opposite order.
double complementarity_gap(const DiagonalMPS& mps);

// Plain-text record: "N D" on the first line, then D lines of
// "Re(a_d) Im(a_d) Re(b_d) Im(b_d)".
void write_mps(std::ostream& os, const DiagonalMPS& mps);
DiagonalMPS read_mps(std::istream& is);
std::string to_text(const DiagonalMPS& mps);

}  // namespace mpsmetro
