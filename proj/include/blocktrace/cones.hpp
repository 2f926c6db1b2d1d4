#pragma once

#include <utility>

#include "blocktrace/blockops.hpp"
#include "blocktrace/matkernel.hpp"

namespace blocktrace {

// Opening half-angle of the complex sector {r e^{i theta} : r > 0,
// |theta| <= alpha}, restricted to [0, pi/2).
struct SectorParams {
  explicit SectorParams(double alpha_radians);

  double alpha = 0.0;
  double tan_alpha = 0.0;
};

// Outcome of a positive-semidefiniteness test. The verdict records the
// tolerance it was decided at, so reports are self-describing.
struct PsdVerdict {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool is_psd = false;
  double tolerance_used = 0.0;
};

struct PptVerdict {
  PsdVerdict direct;
  PsdVerdict transposed;
  bool is_ppt = false;
};

// Result of the sector-membership test. W(a) is contained in S_alpha
// exactly when alpha_min <= alpha. If the real part is not positive
// definite, alpha_min is +infinity and re_pd is false.
struct SectorMargin {
  double alpha_min = 0.0;
  bool re_pd = false;
};

// Cartesian decomposition a = re + i*im with both parts Hermitian:
// re = (a + a*)/2, im = (a - a*)/(2i).
std::pair<ComplexMatrix, ComplexMatrix> cartesian_parts(const ComplexMatrix& a);

// PSD test for a Hermitian matrix; tolerance_used = tol_scale * max(1, lambda_max).
PsdVerdict is_psd(const ComplexMatrix& a, double tol_scale = 1e-10);

// Loewner comparison a >= b, decided as is_psd(a - b) with the tolerance
// scaled by max(1, ||a||_F, ||b||_F).
PsdVerdict loewner_ge(const ComplexMatrix& a, const ComplexMatrix& b,
                      double tol_scale = 1e-10);

// PSD test of both a and its partial transpose.
PptVerdict is_ppt(const BlockMatrix& a, double tol_scale = 1e-10);

// Algebraic sector membership: with K = (Re a)^{-1/2} (Im a) (Re a)^{-1/2},
// alpha_min = arctan(lambda_max(|K|)). This characterizes
// |x* Im(a) x| <= tan(alpha) * x* Re(a) x over all x exactly.
SectorMargin sector_margin(const ComplexMatrix& a);

// lambda_min(Re(e^{-i theta} a)): the signed distance of the numerical
// range from the half-plane boundary with outward normal e^{i theta}.
// Retained as an independent cross-oracle for sector_margin.
double support_function(const ComplexMatrix& a, double theta);

}  // namespace blocktrace
