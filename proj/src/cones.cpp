#include "blocktrace/cones.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace blocktrace {

namespace {

double hermitian_defect(const ComplexMatrix& a) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) acc += std::norm(a(i, j) - std::conj(a(j, i)));
  }
  return std::sqrt(acc);
}

ComplexMatrix symmetrize(const ComplexMatrix& a) {
  ComplexMatrix h(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  }
  return h;
}

void require_hermitian(const ComplexMatrix& a, const char* op) {
  if (!a.square()) throw DimensionError(std::string(op) + ": matrix must be square");
  if (hermitian_defect(a) > 1e-10 * frobenius_norm(a)) {
    throw DomainError(std::string(op) + ": matrix is not Hermitian within tolerance");
  }
}

}  // namespace

SectorParams::SectorParams(double alpha_radians) : alpha(alpha_radians) {
  if (!(alpha_radians >= 0.0) || !(alpha_radians < 1.5707963267948966)) {
    throw DomainError("SectorParams: alpha must lie in [0, pi/2)");
  }
  tan_alpha = std::tan(alpha_radians);
}

std::pair<ComplexMatrix, ComplexMatrix> cartesian_parts(const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("cartesian_parts: matrix must be square");
  const int n = a.rows();
  ComplexMatrix re(n, n);
  ComplexMatrix im(n, n);
  const Complex minus_half_i{0.0, -0.5};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex x = a(i, j);
      const Complex y = std::conj(a(j, i));
      re(i, j) = 0.5 * (x + y);
      im(i, j) = minus_half_i * (x - y);
    }
  }
  return {std::move(re), std::move(im)};
}

PsdVerdict is_psd(const ComplexMatrix& a, double tol_scale) {
  require_hermitian(a, "is_psd");
  const Spectrum spec = hermitian_eig(symmetrize(a));
  PsdVerdict v;
  v.lambda_max = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.front();
  v.lambda_min = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
  v.tolerance_used = tol_scale * std::max(1.0, v.lambda_max);
  v.is_psd = v.lambda_min >= -v.tolerance_used;
  return v;
}

PsdVerdict loewner_ge(const ComplexMatrix& a, const ComplexMatrix& b, double tol_scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("loewner_ge: shape mismatch");
  }
  require_hermitian(a, "loewner_ge");
  require_hermitian(b, "loewner_ge");
  const ComplexMatrix diff = a - b;
  const Spectrum spec = hermitian_eig(symmetrize(diff));
  PsdVerdict v;
  v.lambda_max = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.front();
  v.lambda_min = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
  v.tolerance_used =
      tol_scale * std::max({1.0, frobenius_norm(a), frobenius_norm(b)});
  v.is_psd = v.lambda_min >= -v.tolerance_used;
  return v;
}

PptVerdict is_ppt(const BlockMatrix& a, double tol_scale) {
  PptVerdict v;
  v.direct = is_psd(a.data, tol_scale);
  v.transposed = is_psd(partial_transpose(a).data, tol_scale);
  v.is_ppt = v.direct.is_psd && v.transposed.is_psd;
  return v;
}

SectorMargin sector_margin(const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("sector_margin: matrix must be square");
  auto [re, im] = cartesian_parts(a);
  const Spectrum re_spec = hermitian_eig(re);
  const int n = a.rows();
  SectorMargin margin;
  const double lambda_max = re_spec.eigenvalues.empty() ? 0.0 : re_spec.eigenvalues.front();
  const double lambda_min = re_spec.eigenvalues.empty() ? 0.0 : re_spec.eigenvalues.back();
  // Below this cutoff the inverse square root would amplify noise; report
  // non-sector instead.
  if (!(lambda_min > 1e-12 * std::max(1.0, lambda_max))) {
    margin.alpha_min = std::numeric_limits<double>::infinity();
    margin.re_pd = false;
    return margin;
  }
  ComplexMatrix inv_root(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int k = 0; k < n; ++k) {
        acc += re_spec.eigenvectors(i, k) * (1.0 / std::sqrt(re_spec.eigenvalues[k])) *
               std::conj(re_spec.eigenvectors(j, k));
      }
      inv_root(i, j) = acc;
    }
  }
  const ComplexMatrix k_mat = matmul(matmul(inv_root, im), inv_root);
  const Spectrum k_spec = hermitian_eig(k_mat);
  double radius = 0.0;
  if (!k_spec.eigenvalues.empty()) {
    radius = std::max(std::abs(k_spec.eigenvalues.front()),
                      std::abs(k_spec.eigenvalues.back()));
  }
  margin.alpha_min = std::atan(radius);
  margin.re_pd = true;
  return margin;
}

double support_function(const ComplexMatrix& a, double theta) {
  if (!a.square()) throw DimensionError("support_function: matrix must be square");
  const Complex rot = std::polar(1.0, -theta);
  const ComplexMatrix rotated = a * rot;
  const ComplexMatrix re = cartesian_parts(rotated).first;
  const Spectrum spec = hermitian_eig(re);
  return spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
}

}  // namespace blocktrace
