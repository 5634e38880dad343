#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qce/errors.hpp"

namespace qce {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. The workhorse for every operator
/// in the library: density matrices, projectors, unitaries, generators.
///
/// Values are immutable in spirit: all operations below return new matrices,
/// and nothing here holds hidden state, so concurrent reads are safe.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ * cols_ != data_.size())
      throw std::invalid_argument("ComplexMatrix: rows*cols != entry count");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> entries() { return data_; }
  std::span<const cplx> entries() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  cplx trace() const {
    if (!square()) throw std::invalid_argument("trace: matrix not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest entry magnitude (max norm).
  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  /// Entrywise comparison with an explicit absolute tolerance.
  bool approx_equal(const ComplexMatrix& other, double tol) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (std::abs(data_[k] - other.data_[k]) > tol) return false;
    return true;
  }

  /// max |A - A†| over entries; 0 for exactly Hermitian matrices.
  double hermiticity_defect() const {
    if (!square()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  ComplexMatrix operator+(const ComplexMatrix& rhs) const {
    require_same_shape(rhs, "operator+");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + rhs.data_[k];
    return out;
  }

  ComplexMatrix operator-(const ComplexMatrix& rhs) const {
    require_same_shape(rhs, "operator-");
    ComplexMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - rhs.data_[k];
    return out;
  }

  ComplexMatrix operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("operator*: dimension mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const cplx aik = (*this)(i, k);
        if (aik == cplx(0.0, 0.0)) continue;
        const cplx* brow = &rhs.data_[k * rhs.cols_];
        cplx* orow = &out.data_[i * rhs.cols_];
        for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

  ComplexMatrix operator*(cplx scalar) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * scalar;
    return out;
  }

  friend ComplexMatrix operator*(cplx scalar, const ComplexMatrix& m) { return m * scalar; }

 private:
  void require_same_shape(const ComplexMatrix& rhs, const char* op) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Kronecker product. Block order follows the factor order, so the row index
/// of the result decomposes as (row_a, row_b) in mixed radix.
inline ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const cplx f = a(ia, ja);
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
    }
  return out;
}

inline ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::identity(1);
  ComplexMatrix acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor_product(acc, factors[i]);
  return acc;
}

namespace detail {

/// dims[i] are subsystem dimensions; returns the row-major strides, i.e.
/// stride[i] = product of dims[j] for j > i.
inline std::vector<std::size_t> subsystem_strides(std::span<const std::size_t> dims) {
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];
  return stride;
}

inline std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (std::size_t d : dims) p *= d;
  return p;
}

}  // namespace detail

/// Reduced matrix on the kept subsystems (indices into dims, ascending order
/// expected). Trace is preserved.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                   std::span<const std::size_t> keep) {
  const std::size_t total = detail::product(dims);
  if (!m.square() || m.rows() != total)
    throw std::invalid_argument("partial_trace: dims do not match matrix dimension");
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t s : keep) {
    if (s >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");
    if (kept[s]) throw std::invalid_argument("partial_trace: duplicate keep index");
    kept[s] = true;
  }

  const auto stride = detail::subsystem_strides(dims);
  std::vector<std::size_t> keep_idx(keep.begin(), keep.end());
  std::sort(keep_idx.begin(), keep_idx.end());
  std::vector<std::size_t> trace_idx;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!kept[s]) trace_idx.push_back(s);

  std::size_t kd = 1;
  for (std::size_t s : keep_idx) kd *= dims[s];
  std::size_t td = 1;
  for (std::size_t s : trace_idx) td *= dims[s];

  // Offsets of each kept (resp. traced) multi-index into the full index.
  auto offsets = [&](const std::vector<std::size_t>& subs) {
    std::size_t count = 1;
    for (std::size_t s : subs) count *= dims[s];
    std::vector<std::size_t> off(count, 0);
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t rem = flat, o = 0;
      for (std::size_t k = subs.size(); k-- > 0;) {
        const std::size_t s = subs[k];
        o += (rem % dims[s]) * stride[s];
        rem /= dims[s];
      }
      off[flat] = o;
    }
    return off;
  };
  const auto keep_off = offsets(keep_idx);
  const auto trace_off = offsets(trace_idx);

  ComplexMatrix out(kd, kd);
  for (std::size_t r = 0; r < kd; ++r)
    for (std::size_t c = 0; c < kd; ++c) {
      cplx sum = 0.0;
      for (std::size_t t = 0; t < td; ++t)
        sum += m(keep_off[r] + trace_off[t], keep_off[c] + trace_off[t]);
      out(r, c) = sum;
    }
  return out;
}

/// Hermitian projector onto the span of the selected columns of u.
/// The columns must be orthonormal.
inline ComplexMatrix projector_from_columns(const ComplexMatrix& u,
                                            std::span<const std::size_t> columns,
                                            double tol = 1e-10) {
  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a; b < columns.size(); ++b) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < u.rows(); ++i)
        dot += std::conj(u(i, columns[a])) * u(i, columns[b]);
      const cplx want = (a == b) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      if (std::abs(dot - want) > tol)
        throw std::invalid_argument("projector_from_columns: columns not orthonormal");
    }
  }
  ComplexMatrix p(u.rows(), u.rows());
  for (std::size_t c : columns)
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < u.rows(); ++j) p(i, j) += u(i, c) * std::conj(u(j, c));
  return p;
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues descend; the columns
/// of `eigenvectors` pair with them and carry a fixed phase convention (first
/// non-negligible entry real positive), so results are reproducible.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

namespace detail {

inline void fix_column_phase(ComplexMatrix& v, std::size_t col) {
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double a = std::abs(v(i, col));
    if (a > 1e-12) {
      const cplx ph = std::conj(v(i, col)) / a;
      for (std::size_t k = 0; k < v.rows(); ++k) v(k, col) *= ph;
      return;
    }
  }
}

}  // namespace detail

/// Cyclic Jacobi diagonalization. Capped at 100 sweeps; the off-diagonal
/// Frobenius norm must fall below 1e-12 or the call fails.
inline EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix& h,
                                                       double hermiticity_tol = 1e-10) {
  if (!h.square()) throw std::invalid_argument("hermitian_eigendecomposition: not square");
  if (h.hermiticity_defect() > hermiticity_tol)
    throw std::invalid_argument("hermitian_eigendecomposition: input not Hermitian within tolerance");
  const std::size_t n = h.rows();

  // Work on the Hermitian average so roundoff asymmetry cannot accumulate.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = cplx(std::real(h(i, i)), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  constexpr int max_sweeps = 100;
  constexpr double off_threshold = 1e-12;
  bool converged = (n <= 1);
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(a(i, j));
    if (std::sqrt(off) < off_threshold) {
      converged = true;
      break;
    }

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double b = std::abs(apq);
        if (b < 1e-300) continue;
        const cplx f = apq / b;  // phase of the pivot
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));

        // Rotation angle from the phase-reduced real 2x2 problem.
        const double tau = (aqq - app) / (2.0 * b);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Column rotation G: (p,q) block [[c, s], [-s*conj(f), c*conj(f)]].
        const cplx gqp = -s * std::conj(f);
        const cplx gqq = c * std::conj(f);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * gqp;
          a(k, q) = akp * s + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = s * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cplx(std::real(a(p, p)), 0.0);
        a(q, q) = cplx(std::real(a(q, q)), 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * gqp;
          v(k, q) = vkp * s + vkq * gqq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(a(i, j));
    if (std::sqrt(off) >= off_threshold)
      throw internal_error("hermitian_eigendecomposition: no convergence after 100 sweeps");
  }

  for (std::size_t c = 0; c < n; ++c) detail::fix_column_phase(v, c);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const double lx = std::real(a(x, x)), ly = std::real(a(y, y));
    if (lx != ly) return lx > ly;
    for (std::size_t i = 0; i < n; ++i) {  // tie-break: lexicographic on entries
      const cplx vx = v(i, x), vy = v(i, y);
      if (vx.real() != vy.real()) return vx.real() < vy.real();
      if (vx.imag() != vy.imag()) return vx.imag() < vy.imag();
    }
    return false;
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.eigenvalues[c] = std::real(a(order[c], order[c]));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, c) = v(i, order[c]);
  }
  return out;
}

/// V f(diag) V† for a Hermitian input.
template <class Fn>
ComplexMatrix hermitian_function(const ComplexMatrix& h, Fn&& fn, double hermiticity_tol = 1e-10) {
  const EigenDecomposition eig = hermitian_eigendecomposition(h, hermiticity_tol);
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx fk = fn(eig.eigenvalues[k]);
    if (fk == cplx(0.0, 0.0)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = eig.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.eigenvectors(j, k));
    }
  }
  return out;
}

/// exp(iH) for Hermitian H; always unitary up to roundoff.
inline ComplexMatrix unitary_exp_ih(const ComplexMatrix& h, double hermiticity_tol = 1e-9) {
  return hermitian_function(
      h, [](double lambda) { return cplx(std::cos(lambda), std::sin(lambda)); }, hermiticity_tol);
}

/// max |U†U - I| over entries.
inline double unitarity_defect(const ComplexMatrix& u) {
  if (!u.square()) return std::numeric_limits<double>::infinity();
  const std::size_t n = u.rows();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += std::conj(u(k, i)) * u(k, j);
      m = std::max(m, std::abs(dot - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))));
    }
  return m;
}

namespace detail {

/// In-place A <- (1 ⊗ U ⊗ 1) A restricted to subsystem `s` of `dims`,
/// i.e. left-multiplication by U acting on that tensor factor only.
inline void local_left_apply(ComplexMatrix& a, std::span<const std::size_t> dims, std::size_t s,
                             const ComplexMatrix& u, std::vector<cplx>& scratch) {
  const std::size_t d = a.rows();
  const std::size_t m = dims[s];
  const auto stride = subsystem_strides(dims);
  const std::size_t st = stride[s];
  const std::size_t block = m * st;
  scratch.resize(m);
  cplx* data = a.entries().data();
  const std::size_t cols = a.cols();
  for (std::size_t base = 0; base < d; base += block) {
    for (std::size_t q = 0; q < st; ++q) {
      for (std::size_t col = 0; col < cols; ++col) {
        for (std::size_t k = 0; k < m; ++k) scratch[k] = data[(base + k * st + q) * cols + col];
        for (std::size_t r = 0; r < m; ++r) {
          cplx sum = 0.0;
          for (std::size_t k = 0; k < m; ++k) sum += u(r, k) * scratch[k];
          data[(base + r * st + q) * cols + col] = sum;
        }
      }
    }
  }
}

/// In-place A <- A (1 ⊗ U ⊗ 1) on subsystem `s`.
inline void local_right_apply(ComplexMatrix& a, std::span<const std::size_t> dims, std::size_t s,
                              const ComplexMatrix& u, std::vector<cplx>& scratch) {
  const std::size_t d = a.cols();
  const std::size_t m = dims[s];
  const auto stride = subsystem_strides(dims);
  const std::size_t st = stride[s];
  const std::size_t block = m * st;
  scratch.resize(m);
  cplx* data = a.entries().data();
  const std::size_t cols = a.cols();
  for (std::size_t row = 0; row < a.rows(); ++row) {
    cplx* rp = data + row * cols;
    for (std::size_t base = 0; base < d; base += block) {
      for (std::size_t q = 0; q < st; ++q) {
        for (std::size_t k = 0; k < m; ++k) scratch[k] = rp[base + k * st + q];
        for (std::size_t c = 0; c < m; ++c) {
          cplx sum = 0.0;
          for (std::size_t k = 0; k < m; ++k) sum += scratch[k] * u(k, c);
          rp[base + c * st + q] = sum;
        }
      }
    }
  }
}

}  // namespace detail

/// (U_1 ⊗ ... ⊗ U_N)† A (U_1 ⊗ ... ⊗ U_N), applied factor by factor.
/// Much cheaper than forming the joint unitary for multipartite systems.
inline ComplexMatrix rotate_to_local_basis(const ComplexMatrix& a,
                                           std::span<const std::size_t> dims,
                                           std::span<const ComplexMatrix> unitaries) {
  ComplexMatrix out = a;
  std::vector<cplx> scratch;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    const ComplexMatrix udag = unitaries[s].adjoint();
    detail::local_left_apply(out, dims, s, udag, scratch);
    detail::local_right_apply(out, dims, s, unitaries[s], scratch);
  }
  return out;
}

/// (U_1 ⊗ ... ⊗ U_N) A (U_1 ⊗ ... ⊗ U_N)†, the inverse rotation.
inline ComplexMatrix rotate_from_local_basis(const ComplexMatrix& a,
                                             std::span<const std::size_t> dims,
                                             std::span<const ComplexMatrix> unitaries) {
  ComplexMatrix out = a;
  std::vector<cplx> scratch;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    const ComplexMatrix udag = unitaries[s].adjoint();
    detail::local_left_apply(out, dims, s, unitaries[s], scratch);
    detail::local_right_apply(out, dims, s, udag, scratch);
  }
  return out;
}

}  // namespace qce
