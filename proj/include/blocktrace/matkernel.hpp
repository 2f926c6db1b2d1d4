#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "blocktrace/errors.hpp"

namespace blocktrace {

using Complex = std::complex<double>;

// Dense row-major complex matrix. The universal numeric carrier of the
// library; every entry is checked finite on construction.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);                              // zeros
  ComplexMatrix(int rows, int cols, std::vector<Complex> entries);
  // Row-wise brace construction, mostly for tests and fixtures.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(int n);
  static ComplexMatrix zeros(int rows, int cols) { return {rows, cols}; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int i, int j) { return entries_[index(i, j)]; }
  const Complex& operator()(int i, int j) const { return entries_[index(i, j)]; }

  Complex* data() { return entries_.data(); }
  const Complex* data() const { return entries_.data(); }
  std::size_t size() const { return entries_.size(); }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  void check_finite() const;

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scalar);
ComplexMatrix operator*(Complex scalar, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
// descending, unitary eigenvector matrix with matching columns.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);

Complex trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

// tr(a* b); the Hilbert-Schmidt pairing.
Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Determinant via LU with partial pivoting by maximal modulus. Returns
// exactly 0 when a pivot column is entirely below 1e-300 in modulus.
Complex lu_det(const ComplexMatrix& a);

// Cyclic complex Jacobi with deterministic sweep order (row-major upper
// triangle). Input must be Hermitian within 1e-12 * ||a||_F; it is
// symmetrized as (a + a*)/2 before iterating. Converged when every
// off-diagonal modulus is <= 1e-13 * ||a||_F, at most 40 sweeps.
Spectrum hermitian_eig(const ComplexMatrix& a);

// Hermitian PSD square root V Lambda^{1/2} V*. Eigenvalues in
// [-1e-6 * max(1, lambda_max), 0) are treated as round-off and clipped to
// zero; anything more negative is rejected as materially indefinite.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

// Singular values of a square matrix, descending: eigenvalues of (a* a)^{1/2}.
std::vector<double> singular_values(const ComplexMatrix& a);

// Schatten q-norm for q >= 1; q = infinity gives the spectral norm.
double schatten_norm(const ComplexMatrix& a, double q);

// Tensor product: block (i,j) of the result is a(i,j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace blocktrace
