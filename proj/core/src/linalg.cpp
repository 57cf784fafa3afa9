#include "memcap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "memcap/errors.hpp"

namespace memcap {

namespace {

constexpr double kEigenClip = 1e-12;
constexpr double kJacobiOffTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw ValidationError("matrix dimension must be in [1, 16], got " + std::to_string(dim));
  }
}

double neg_xlog2x(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::vector<double> eigen_2x2(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_tr = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::sqrt(half_diff * half_diff + std::norm(m(0, 1)));
  return {half_tr + radius, half_tr - radius};
}

double off_diagonal_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (i != j) sum += std::norm(m(i, j));
    }
  }
  return std::sqrt(sum);
}

double frobenius_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (const Complex& z : m.entries()) sum += std::norm(z);
  return std::sqrt(sum);
}

// One complex Jacobi rotation A <- U^H A U annihilating A(p, q).
void jacobi_rotate(ComplexMatrix& a, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;  // e^{i phi}
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
  const Complex upp = c;
  const Complex upq = s;
  const Complex uqp = -s * std::conj(phase);
  const Complex uqq = c * std::conj(phase);

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * upp + akq * uqp;
    a(k, q) = akp * upq + akq * uqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

std::vector<double> eigen_jacobi(ComplexMatrix a) {
  const std::size_t n = a.dim();
  const double scale = std::max(1.0, frobenius_norm(a));
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffTol * scale) {
      std::vector<double> values(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
      return values;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, p, q);
    }
  }
  throw NumericalError("Jacobi eigensolver did not converge");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  check_dim(dim);
  if (data_.size() != dim * dim) throw ValidationError("entry count does not match dimension");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  check_dim(dim_);
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw ValidationError("matrix literal is not square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
  return sum;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  if (other.dim_ != dim_) throw ValidationError("dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw ValidationError("dimension mismatch");
  std::transform(data_.begin(), data_.end(), rhs.data_.begin(), data_.begin(), std::plus<>());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rhs.dim_ != dim_) throw ValidationError("dimension mismatch");
  std::transform(data_.begin(), data_.end(), rhs.data_.begin(), data_.begin(), std::minus<>());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (Complex& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.dim_ != rhs.dim_) throw ValidationError("dimension mismatch");
  const std::size_t n = lhs.dim_;
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lik = lhs(i, k);
      if (lik == Complex(0.0)) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  const std::size_t n = lhs.dim();
  const std::size_t m = rhs.dim();
  ComplexMatrix out(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) out(i * m + k, j * m + l) = lhs(i, j) * rhs(k, l);
      }
    }
  }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_finite()) throw ValidationError("density matrix has non-finite entries");
  if (!m_.is_hermitian(kHermitianTol)) throw ValidationError("density matrix is not Hermitian");
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > kHermitianTol) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const auto eig = herm_eigenvalues(m_);
  if (eig.back() < -kHermitianTol) throw ValidationError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(ComplexMatrix::diagonal(probabilities));
}

DensityMatrix DensityMatrix::qubit(double a, Complex b) {
  return DensityMatrix(ComplexMatrix{{a, b}, {std::conj(b), 1.0 - a}});
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  double norm2 = 0.0;
  for (const Complex& z : psi) norm2 += std::norm(z);
  if (!(norm2 > 0.0)) throw ValidationError("pure state vector has zero norm");
  ComplexMatrix m(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]) / norm2;
  }
  return DensityMatrix(std::move(m));
}

std::vector<double> herm_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_finite()) throw ValidationError("matrix has non-finite entries");
  if (!m.is_hermitian(kHermitianTol)) throw ValidationError("matrix is not Hermitian");
  std::vector<double> values;
  if (m.dim() == 1) {
    values = {m(0, 0).real()};
  } else if (m.dim() == 2) {
    values = eigen_2x2(m);
  } else {
    values = eigen_jacobi(m);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double shannon_entropy_bits(std::span<const double> probabilities) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < -kEigenClip) throw DomainError("negative probability in entropy");
    sum += neg_xlog2x(std::clamp(p, 0.0, 1.0));
  }
  return sum;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const auto eig = herm_eigenvalues(rho.matrix());
  return shannon_entropy_bits(eig);
}

double binary_entropy(double x) {
  if (!(x >= -kEigenClip && x <= 1.0 + kEigenClip)) {
    throw DomainError("binary_entropy argument outside [0, 1]: " + std::to_string(x));
  }
  x = std::clamp(x, 0.0, 1.0);
  // Pairing on the larger argument makes 1 - hi exact, so H(x) and H(1 - x)
  // see the same (lo, hi) pair.
  const double hi = x >= 0.5 ? x : 1.0 - x;
  const double lo = 1.0 - hi;
  return neg_xlog2x(lo) + neg_xlog2x(hi);
}

}  // namespace memcap
