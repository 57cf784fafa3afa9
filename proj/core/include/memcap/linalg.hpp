#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace memcap {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;
inline constexpr double kHermitianTol = 1e-10;

/// Dense square complex matrix, row-major, dimension 1..16.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  /// Row-wise literal, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  bool is_hermitian(double tol = kHermitianTol) const;
  bool is_finite() const;
  /// Largest entrywise modulus of (this - other).
  double max_abs_diff(const ComplexMatrix& other) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex s) { return lhs *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix rhs) { return rhs *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Kronecker product; the result dimension must stay within kMaxDim.
ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

/// Hermitian, unit-trace, positive semidefinite matrix (tolerance 1e-10).
class DensityMatrix {
 public:
  /// Validates and wraps; throws ValidationError on violation.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix diagonal(std::span<const double> probabilities);
  /// Qubit state ((a, b), (conj(b), 1 - a)).
  static DensityMatrix qubit(double a, Complex b);
  /// |psi><psi| for a (not necessarily normalised) vector.
  static DensityMatrix pure(std::span<const Complex> psi);

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

 private:
  ComplexMatrix m_;
};

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Dimension 2 uses the trace/determinant closed form; larger dimensions use
/// cyclic complex Jacobi rotations until the off-diagonal Frobenius norm falls
/// below 1e-12 (relative to the matrix norm when that exceeds one).
std::vector<double> herm_eigenvalues(const ComplexMatrix& m);

/// Von Neumann entropy in bits, with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Shannon entropy in bits of a probability vector whose entries may carry
/// roundoff down to -1e-12.
double shannon_entropy_bits(std::span<const double> probabilities);

/// H(x) = -x log2 x - (1-x) log2 (1-x); H(x) == H(1-x) bit-for-bit.
double binary_entropy(double x);

}  // namespace memcap
