#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blocktrace/blockops.hpp"
#include "blocktrace/cones.hpp"
#include "blocktrace/generators.hpp"
#include "blocktrace/matkernel.hpp"

namespace blocktrace {

// One inequality evaluation. `terms` lists the summands: entries whose name
// starts with "lhs_" recompose lhs by floating addition in order, entries
// starting with "rhs_" recompose rhs, anything else is informational.
struct Verdict {
  std::string id;
  std::vector<std::pair<std::string, double>> terms;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs
  double tolerance = 0.0;
  bool holds = false;  // gap >= -tolerance
  std::string scale_note;

  double term(const std::string& name) const;
};

inline constexpr double kScalarTol = 1e-9;
inline constexpr double kLoewnerTol = 1e-8;

// tr(A) + ||A||_q >= ||tr1 A||_q + ||tr2 A||_q for PSD A, q >= 1 or inf.
Verdict check_schatten(const BlockMatrix& a, double q, double tol_scale = kScalarTol);

// (tr A) I + A >= I (x) tr1(A) + tr2(A) (x) I in the Loewner order; the gap
// is the smallest eigenvalue of LHS - RHS.
Verdict check_loewner_sum(const BlockMatrix& a, double tol_scale = kLoewnerTol);

// (tr A) I - tr2(A) (x) I >= A - I (x) tr1(A) in the Loewner order.
Verdict check_loewner_diff(const BlockMatrix& a, double tol_scale = kLoewnerTol);

// The 2x2-block positivity certificate behind check_loewner_diff: for PSD
// A with m = 2 the returned matrix is PSD, and its positivity is equivalent
// to the Loewner inequality above.
ComplexMatrix loewner_diff_certificate(const BlockMatrix& a);

// Positivity of both images of X -> (tr X) I + X applied blockwise: the
// direct pattern [phi(A_ij)] and the position-swapped pattern [phi(A_ji)].
// The gap is the smaller of the two minimal eigenvalues.
Verdict check_ppt_map(const BlockMatrix& a, double tol_scale = kLoewnerTol);

// (tr A)^{mn} + det A >= det(tr1 A)^m + det(tr2 A)^n for PSD A.
Verdict check_det_sum(const BlockMatrix& a, double tol_scale = kScalarTol);

// (tr A)^{mn} - det(tr2 A)^n >= |det A - det(tr1 A)^m| for PSD A.
Verdict check_det_abs(const BlockMatrix& a, double tol_scale = kScalarTol);

// (tr A)^{mn} + det(tr1 A)^m >= det A + det(tr2 A)^n for PSD A.
Verdict check_det_swap(const BlockMatrix& a, double tol_scale = kScalarTol);

// (tr A)^{mn} + det(tr2 A)^n >= det A + det(tr1 A)^m for PPT A. With
// enforce_hypothesis = false the PPT gate is skipped and the terms are
// evaluated as-is (exploration mode; the result is reported, never
// asserted).
Verdict check_det_ppt(const BlockMatrix& a, double tol_scale = kScalarTol,
                      bool enforce_hypothesis = true);

// det X + det Y >= det W + det Z for PSD X, Y, W, Z with X + Y >= W + Z,
// X >= W and X >= Z.
Verdict check_det_four(const ComplexMatrix& x, const ComplexMatrix& y,
                       const ComplexMatrix& w, const ComplexMatrix& z,
                       double tol_scale = kScalarTol);
Verdict check_det_four(const Quadruple& q, double tol_scale = kScalarTol);

// det(A + B + C) + det C >= det(A + C) + det(B + C) for PSD A, B, C.
Verdict check_det_three(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ComplexMatrix& c, double tol_scale = kScalarTol);

// (sec alpha)^n det(Re A) >= |det A| at the measured sector angle alpha.
Verdict check_sector_det(const ComplexMatrix& a, double tol_scale = kScalarTol);

// Two spectral comparisons for any square A: every lambda_i(Re A) <= s_i(A),
// and det(Re A) + |det(Im A)| <= |det A| when Re A is positive definite
// (the determinant part is skipped otherwise and noted in scale_note).
Verdict check_re_singular(const ComplexMatrix& a, double tol_scale = kScalarTol);

// (tr|A|)^{mn} + |det tr1(A)|^m >= (cos alpha)^{mn} (|det A| + |det tr2(A)|^n)
// for a block matrix whose numerical range lies in the sector of half-angle
// alpha. Takes a single matrix argument; when no angle is supplied the
// measured sector margin is used, which stresses the inequality at the
// tightest valid angle.
Verdict check_sector_main(const BlockMatrix& a,
                          std::optional<SectorParams> sector = std::nullopt,
                          double tol_scale = kScalarTol);

}  // namespace blocktrace
