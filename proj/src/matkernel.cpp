#include "blocktrace/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace blocktrace {

namespace {

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.square()) {
    throw DimensionError(std::string(op) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double hermitian_defect(const ComplexMatrix& a) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const Complex d = a(i, j) - std::conj(a(j, i));
      acc += std::norm(d);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be nonnegative");
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be nonnegative");
  if (entries_.size() != static_cast<std::size_t>(rows) * cols) {
    throw DimensionError("entry count " + std::to_string(entries_.size()) +
                         " does not match shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  check_finite();
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  entries_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) {
      throw DimensionError("ragged initializer rows");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  check_finite();
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix eye(n, n);
  for (int i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

void ComplexMatrix::check_finite() const {
  for (const Complex& z : entries_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("matrix has a non-finite entry");
    }
  }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionError("add: shape mismatch");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionError("sub: shape mismatch");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (Complex& z : entries_) z *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scalar) { return a *= scalar; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) +
                         " and " + std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  }
  return r;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  }
  return r;
}

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  Complex t{};
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double frobenius_norm(const ComplexMatrix& a) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::norm(a.data()[k]);
  return std::sqrt(acc);
}

Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius_inner: shape mismatch");
  }
  Complex acc{};
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a.data()[k]) * b.data()[k];
  return acc;
}

Complex lu_det(const ComplexMatrix& a) {
  require_square(a, "lu_det");
  const int n = a.rows();
  if (n == 0) return 1.0;
  ComplexMatrix w = a;
  double sign = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(w(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(w(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best < 1e-300) return Complex{0.0, 0.0};
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(w(k, j), w(pivot, j));
      sign = -sign;
    }
    const Complex inv_pivot = 1.0 / w(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = w(i, k) * inv_pivot;
      if (f == Complex{}) continue;
      for (int j = k; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  Complex det{sign, 0.0};
  for (int k = 0; k < n; ++k) det *= w(k, k);
  return det;
}

Spectrum hermitian_eig(const ComplexMatrix& a) {
  require_square(a, "hermitian_eig");
  const int n = a.rows();
  const double anorm = frobenius_norm(a);
  if (hermitian_defect(a) > 1e-12 * anorm) {
    throw DomainError("hermitian_eig: input is not Hermitian within tolerance");
  }

  // Symmetrize; exact for already-Hermitian input.
  ComplexMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double thresh = 1e-13 * anorm;
  constexpr int kMaxSweeps = 40;
  double offmax = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    offmax = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) offmax = std::max(offmax, std::abs(w(p, q)));
    }
    if (offmax <= thresh) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex beta = w(p, q);
        const double beta_abs = std::abs(beta);
        if (beta_abs == 0.0) continue;
        const Complex phase = beta / beta_abs;
        const double alpha = w(p, p).real();
        const double gamma = w(q, q).real();
        const double tau = (gamma - alpha) / (2.0 * beta_abs);
        // Smaller-magnitude root of t^2 - 2*tau*t - 1 = 0, in the
        // cancellation-free form.
        const double t =
            (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex s_phase = s * phase;
        const Complex s_conj_phase = s * std::conj(phase);

        // w <- U* w U with U_pp = U_qq = c, U_pq = -s*phase, U_qp = s*conj(phase).
        for (int k = 0; k < n; ++k) {
          const Complex wkp = w(k, p);
          const Complex wkq = w(k, q);
          w(k, p) = c * wkp + s_conj_phase * wkq;
          w(k, q) = -s_phase * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex wpk = w(p, k);
          const Complex wqk = w(q, k);
          w(p, k) = c * wpk + s_phase * wqk;
          w(q, k) = -s_conj_phase * wpk + c * wqk;
        }
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        w(p, p) = Complex{w(p, p).real(), 0.0};
        w(q, q) = Complex{w(q, q).real(), 0.0};

        for (int k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + s_conj_phase * vkq;
          v(k, q) = -s_phase * vkp + c * vkq;
        }
      }
    }
  }
  if (offmax > thresh) {
    // Re-scan after the final sweep before giving up.
    double residual = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) residual = std::max(residual, std::abs(w(p, q)));
    }
    if (residual > thresh) {
      throw NumericError("hermitian_eig: Jacobi did not converge in 40 sweeps", residual);
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return w(i, i).real() > w(j, j).real(); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n, n);
  for (int col = 0; col < n; ++col) {
    spec.eigenvalues[col] = w(order[col], order[col]).real();
    for (int row = 0; row < n; ++row) spec.eigenvectors(row, col) = v(row, order[col]);
  }

  // Reconstruction guard: || a - V diag V* ||_F <= 1e-10 * max(1, ||a||_F).
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int k = 0; k < n; ++k) {
        acc += spec.eigenvectors(i, k) * spec.eigenvalues[k] *
               std::conj(spec.eigenvectors(j, k));
      }
      resid += std::norm(a(i, j) - acc);
    }
  }
  resid = std::sqrt(resid);
  if (resid > 1e-10 * std::max(1.0, anorm)) {
    throw NumericError("hermitian_eig: reconstruction residual too large", resid);
  }
  return spec;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const Spectrum spec = hermitian_eig(a);
  const int n = a.rows();
  if (n == 0) return a;
  const double lambda_max = spec.eigenvalues.front();
  const double lambda_min = spec.eigenvalues.back();
  if (lambda_min < -1e-6 * std::max(1.0, lambda_max)) {
    throw DomainError("psd_sqrt: input is materially indefinite (lambda_min " +
                      std::to_string(lambda_min) + ")");
  }
  ComplexMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(spec.eigenvalues[k], 0.0));
        acc += spec.eigenvectors(i, k) * root * std::conj(spec.eigenvectors(j, k));
      }
      r(i, j) = acc;
    }
  }
  return r;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  require_square(a, "singular_values");
  // Hermitian input: |a| has eigenvalues |lambda_i(a)|. Going through a* a
  // would square the conditioning and turn O(eps) eigenvalue round-off into
  // O(sqrt(eps)) singular-value error near zero.
  if (hermitian_defect(a) <= 1e-12 * frobenius_norm(a)) {
    const Spectrum spec = hermitian_eig(a);
    std::vector<double> s(spec.eigenvalues.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::abs(spec.eigenvalues[i]);
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
  }
  const ComplexMatrix gram = matmul(adjoint(a), a);
  const Spectrum spec = hermitian_eig(gram);
  std::vector<double> s(spec.eigenvalues.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = std::sqrt(std::max(spec.eigenvalues[i], 0.0));
  }
  return s;  // descending, inherited from the eigenvalue order
}

double schatten_norm(const ComplexMatrix& a, double q) {
  const bool is_inf = std::isinf(q) && q > 0;
  if (!is_inf && !(q >= 1.0)) {
    throw DomainError("schatten_norm: q must be >= 1 or infinity");
  }
  const std::vector<double> s = singular_values(a);
  if (s.empty()) return 0.0;
  if (is_inf) return s.front();
  if (q == 1.0) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc;
  }
  double acc = 0.0;
  for (double v : s) acc += std::pow(v, q);
  return std::pow(acc, 1.0 / q);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (int p = 0; p < b.rows(); ++p) {
        for (int qq = 0; qq < b.cols(); ++qq) {
          r(i * b.rows() + p, j * b.cols() + qq) = aij * b(p, qq);
        }
      }
    }
  }
  return r;
}

}  // namespace blocktrace
