#pragma once

#include <vector>

#include "qce/complex_matrix.hpp"
#include "qce/states.hpp"

namespace qce {

/// A projective measurement: Hermitian, mutually orthogonal projectors
/// summing to the identity. Each projector's range is one macrostate and its
/// rank is the macrostate volume.
struct CoarseGraining {
  std::vector<ComplexMatrix> projectors;
  std::size_t dim = 0;
};

/// Per-invariant diagnostics from validate().
struct CoarseGrainingValidation {
  bool hermitian = false;
  bool orthogonal = false;
  bool idempotent = false;
  bool complete = false;
  double hermiticity_defect = 0.0;
  double orthogonality_defect = 0.0;
  double idempotency_defect = 0.0;
  double completeness_defect = 0.0;

  bool pass() const { return hermitian && orthogonal && idempotent && complete; }
};

inline CoarseGrainingValidation validate(const CoarseGraining& cg, double tol = 1e-10) {
  CoarseGrainingValidation v;
  ComplexMatrix sum(cg.dim, cg.dim);
  for (const ComplexMatrix& p : cg.projectors) {
    if (!p.square() || p.rows() != cg.dim) {
      v.completeness_defect = std::numeric_limits<double>::infinity();
      return v;
    }
    v.hermiticity_defect = std::max(v.hermiticity_defect, p.hermiticity_defect());
    v.idempotency_defect = std::max(v.idempotency_defect, ((p * p) - p).max_abs());
    sum = sum + p;
  }
  for (std::size_t i = 0; i < cg.projectors.size(); ++i)
    for (std::size_t j = i + 1; j < cg.projectors.size(); ++j)
      v.orthogonality_defect =
          std::max(v.orthogonality_defect, (cg.projectors[i] * cg.projectors[j]).max_abs());
  v.completeness_defect = (sum - ComplexMatrix::identity(cg.dim)).max_abs();

  v.hermitian = v.hermiticity_defect <= tol;
  v.orthogonal = v.orthogonality_defect <= tol;
  v.idempotent = v.idempotency_defect <= tol;
  v.complete = v.completeness_defect <= tol;
  return v;
}

/// One coarse-graining per subsystem; their tensor products describe a joint
/// local measurement.
struct LocalCoarseGraining {
  std::vector<CoarseGraining> factors;
  PartitionSpec partition;
};

/// One unitary per subsystem; columns define a rank-1 local coarse-graining.
/// The canonical search point for the entropy minimization.
struct LocalBasisPoint {
  std::vector<ComplexMatrix> unitaries;

  void check(double tol = 1e-9) const {
    if (unitaries.empty()) throw std::invalid_argument("basis point: no subsystems");
    for (const ComplexMatrix& u : unitaries)
      if (!u.square() || unitarity_defect(u) > tol)
        throw std::invalid_argument("basis point: factor not unitary within tolerance");
  }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const ComplexMatrix& u : unitaries) d.push_back(u.rows());
    return d;
  }
};

/// Full-space coarse-graining from per-subsystem factors: all tensor products
/// of factor projectors, in lexicographic factor-index order.
inline CoarseGraining product_cg(const LocalCoarseGraining& local) {
  CoarseGraining out;
  out.dim = local.partition.total_dim();
  std::vector<ComplexMatrix> acc = {ComplexMatrix::identity(1)};
  for (const CoarseGraining& factor : local.factors) {
    std::vector<ComplexMatrix> next;
    next.reserve(acc.size() * factor.projectors.size());
    for (const ComplexMatrix& a : acc)
      for (const ComplexMatrix& p : factor.projectors) next.push_back(tensor_product(a, p));
    acc = std::move(next);
  }
  out.projectors = std::move(acc);
  return out;
}

/// Rank-1 coarse-graining from the columns of a unitary.
inline CoarseGraining basis_cg(const ComplexMatrix& u) {
  CoarseGraining cg;
  cg.dim = u.rows();
  for (std::size_t c = 0; c < u.cols(); ++c) {
    std::size_t idx[1] = {c};
    cg.projectors.push_back(projector_from_columns(u, idx, 1e-9));
  }
  return cg;
}

inline CoarseGraining computational_cg(std::size_t dim) {
  return basis_cg(ComplexMatrix::identity(dim));
}

inline LocalCoarseGraining from_basis_point(const LocalBasisPoint& p) {
  p.check();
  LocalCoarseGraining out;
  out.partition = PartitionSpec(p.dims());
  for (const ComplexMatrix& u : p.unitaries) out.factors.push_back(basis_cg(u));
  return out;
}

/// Coarse-graining by the eigenspaces of a state: one projector per cluster
/// of eigenvalues closer than degeneracy_tol. Measuring it reproduces the
/// von Neumann entropy.
inline CoarseGraining eigenbasis_cg(const DensityMatrix& rho, double degeneracy_tol = 1e-8) {
  const EigenDecomposition eig = hermitian_eigendecomposition(rho.matrix());
  CoarseGraining out;
  out.dim = rho.dim();
  std::size_t start = 0;
  while (start < eig.eigenvalues.size()) {
    std::size_t end = start + 1;
    while (end < eig.eigenvalues.size() &&
           eig.eigenvalues[end - 1] - eig.eigenvalues[end] <= degeneracy_tol)
      ++end;
    std::vector<std::size_t> cols;
    for (std::size_t c = start; c < end; ++c) cols.push_back(c);
    out.projectors.push_back(projector_from_columns(eig.eigenvectors, cols, 1e-8));
    start = end;
  }
  return out;
}

/// Split every projector into rank-1 pieces (an orthonormal basis of its
/// range). Never increases the entropy of any state measured with it.
inline CoarseGraining refine_to_rank1(const CoarseGraining& cg) {
  CoarseGraining out;
  out.dim = cg.dim;
  for (const ComplexMatrix& p : cg.projectors) {
    const EigenDecomposition eig = hermitian_eigendecomposition(p);
    for (std::size_t c = 0; c < eig.eigenvalues.size(); ++c) {
      if (eig.eigenvalues[c] < 0.5) break;  // eigenvalues of a projector are 0 or 1
      std::size_t idx[1] = {c};
      out.projectors.push_back(projector_from_columns(eig.eigenvectors, idx, 1e-8));
    }
  }
  return out;
}

/// Pinch rho in the rank-1 product basis of p: rho' = sum_k Pi_k rho Pi_k.
/// The result is the nearest classically correlated state for that basis.
inline DensityMatrix dephase(const DensityMatrix& rho, const LocalBasisPoint& p) {
  p.check();
  if (p.dims() != std::vector<std::size_t>(rho.dims().begin(), rho.dims().end()))
    throw std::invalid_argument("dephase: basis point does not match partition");
  ComplexMatrix rotated = rotate_to_local_basis(rho.matrix(), rho.dims(), p.unitaries);
  ComplexMatrix diag(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) diag(i, i) = cplx(std::real(rotated(i, i)), 0.0);
  ComplexMatrix back = rotate_from_local_basis(diag, rho.dims(), p.unitaries);
  // Symmetrize away rotation roundoff.
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    back(i, i) = cplx(std::real(back(i, i)), 0.0);
    for (std::size_t j = i + 1; j < rho.dim(); ++j) {
      const cplx v = 0.5 * (back(i, j) + std::conj(back(j, i)));
      back(i, j) = v;
      back(j, i) = std::conj(v);
    }
  }
  return DensityMatrix(std::move(back), rho.partition());
}

}  // namespace qce
