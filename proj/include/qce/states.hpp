#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qce/complex_matrix.hpp"
#include "qce/rng.hpp"

namespace qce {

/// Ordered subsystem dimensions of a multipartite Hilbert space.
struct PartitionSpec {
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;  // optional, same length as dims when present

  PartitionSpec() = default;
  explicit PartitionSpec(std::vector<std::size_t> d, std::vector<std::string> l = {})
      : dims(std::move(d)), labels(std::move(l)) {
    if (dims.empty()) throw invalid_state_error("partition: no subsystems");
    for (std::size_t d_i : dims)
      if (d_i < 2) throw invalid_state_error("partition: subsystem dimension < 2");
    if (!labels.empty() && labels.size() != dims.size())
      throw invalid_state_error("partition: label count != subsystem count");
  }

  std::size_t total_dim() const { return detail::product(dims); }
  std::size_t subsystem_count() const { return dims.size(); }

  bool operator==(const PartitionSpec& o) const { return dims == o.dims; }
};

/// Validated density operator with its subsystem partition.
///
/// Construction enforces Hermiticity (1e-10), unit trace (1e-10), and
/// positivity: eigenvalues in [-1e-8, 0) are clipped to zero and the trace
/// renormalized, anything more negative is rejected.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, PartitionSpec partition)
      : matrix_(std::move(matrix)), partition_(std::move(partition)) {
    if (!matrix_.square()) throw invalid_state_error("density matrix: not square");
    if (matrix_.rows() != partition_.total_dim())
      throw invalid_state_error("density matrix: dimension does not match partition");
    if (matrix_.hermiticity_defect() > 1e-10)
      throw invalid_state_error("density matrix: not Hermitian within 1e-10");
    const double tr = std::real(matrix_.trace());
    if (std::abs(tr - 1.0) > 1e-10) throw invalid_state_error("density matrix: trace != 1 within 1e-10");

    const EigenDecomposition eig = hermitian_eigendecomposition(matrix_);
    const double min_eig = eig.eigenvalues.back();
    if (min_eig < -1e-8)
      throw invalid_state_error("density matrix: negative eigenvalue below -1e-8");
    if (min_eig < 0.0) {
      // Clip eigensolver-scale negativity and renormalize.
      std::vector<double> lam = eig.eigenvalues;
      double sum = 0.0;
      for (double& l : lam) {
        if (l < 0.0) l = 0.0;
        sum += l;
      }
      ComplexMatrix fixed(matrix_.rows(), matrix_.rows());
      for (std::size_t k = 0; k < lam.size(); ++k) {
        const double w = lam[k] / sum;
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < matrix_.rows(); ++i)
          for (std::size_t j = 0; j < matrix_.rows(); ++j)
            fixed(i, j) += w * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
      }
      matrix_ = std::move(fixed);
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const PartitionSpec& partition() const { return partition_; }
  std::size_t dim() const { return matrix_.rows(); }
  std::span<const std::size_t> dims() const { return partition_.dims; }

  /// Same operator viewed under a different split of the same space.
  DensityMatrix repartitioned(PartitionSpec p) const {
    if (p.total_dim() != dim())
      throw invalid_state_error("repartition: dimension mismatch");
    return DensityMatrix(matrix_, std::move(p));
  }

  /// Reduced state on the kept subsystems.
  DensityMatrix reduced(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> keep_sorted(keep.begin(), keep.end());
    std::sort(keep_sorted.begin(), keep_sorted.end());
    ComplexMatrix red = partial_trace(matrix_, dims(), keep_sorted);
    std::vector<std::size_t> new_dims;
    std::vector<std::string> new_labels;
    for (std::size_t s : keep_sorted) {
      new_dims.push_back(partition_.dims[s]);
      if (!partition_.labels.empty()) new_labels.push_back(partition_.labels[s]);
    }
    return DensityMatrix(std::move(red), PartitionSpec(new_dims, new_labels));
  }

 private:
  ComplexMatrix matrix_;
  PartitionSpec partition_;
};

/// Normalized state vector with a subsystem partition.
struct PureState {
  std::vector<cplx> amplitudes;
  PartitionSpec partition;

  PureState(std::vector<cplx> amps, PartitionSpec p)
      : amplitudes(std::move(amps)), partition(std::move(p)) {
    if (amplitudes.size() != partition.total_dim())
      throw invalid_state_error("pure state: amplitude count does not match partition");
    double n = 0.0;
    for (const cplx& a : amplitudes) n += std::norm(a);
    if (std::abs(n - 1.0) > 1e-10) throw invalid_state_error("pure state: not normalized within 1e-10");
  }

  std::size_t dim() const { return amplitudes.size(); }
};

inline DensityMatrix density_from_pure(const PureState& psi) {
  const std::size_t d = psi.dim();
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rho(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
  return DensityMatrix(std::move(rho), psi.partition);
}

/// n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2), one qubit per subsystem.
inline PureState ghz_state(std::size_t n) {
  if (n < 2) throw std::invalid_argument("ghz_state: need at least 2 qubits");
  const std::size_t d = std::size_t{1} << n;
  std::vector<cplx> amps(d, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  amps[0] = r;
  amps[d - 1] = r;
  return PureState(std::move(amps), PartitionSpec(std::vector<std::size_t>(n, 2)));
}

/// Two Bell pairs |phi+>_{A1 B1} ⊗ |phi+>_{A2 B2}, stored in subsystem order
/// A1, A2, B1, B2 so different groupings of the four qubits stay expressible.
inline PureState two_bell_state() {
  std::vector<cplx> amps(16, 0.0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const std::size_t idx = (a << 3) | (b << 2) | (a << 1) | b;  // |a b a b>
      amps[idx] = 0.5;
    }
  return PureState(std::move(amps),
                   PartitionSpec({2, 2, 2, 2}, {"A1", "A2", "B1", "B2"}));
}

/// rho = sum_ij sigma_ij |a_i b_i ... c_i><a_j b_j ... c_j| for per-subsystem
/// orthonormal bases (columns of the given unitaries). sigma must be a valid
/// coefficient matrix: Hermitian, unit trace, positive semidefinite.
inline DensityMatrix maximally_correlated_state(const ComplexMatrix& sigma,
                                                const std::vector<ComplexMatrix>& bases) {
  if (!sigma.square()) throw invalid_state_error("maximally correlated: sigma not square");
  const std::size_t m = sigma.rows();
  if (sigma.hermiticity_defect() > 1e-10)
    throw invalid_state_error("maximally correlated: sigma_ij != conj(sigma_ji)");
  if (std::abs(std::real(sigma.trace()) - 1.0) > 1e-10 || std::abs(std::imag(sigma.trace())) > 1e-10)
    throw invalid_state_error("maximally correlated: sum_i sigma_ii != 1");
  {
    const EigenDecomposition eig = hermitian_eigendecomposition(sigma);
    if (eig.eigenvalues.back() < -1e-8)
      throw invalid_state_error("maximally correlated: sigma not positive semidefinite");
  }
  if (bases.empty()) throw invalid_state_error("maximally correlated: no subsystem bases");
  std::vector<std::size_t> dims;
  for (const ComplexMatrix& b : bases) {
    if (!b.square() || unitarity_defect(b) > 1e-9)
      throw invalid_state_error("maximally correlated: basis not unitary");
    if (b.rows() < m)
      throw invalid_state_error("maximally correlated: basis smaller than sigma index range");
    dims.push_back(b.rows());
  }

  const std::size_t d = detail::product(dims);
  // |a_i b_i ... c_i> as full-space columns.
  std::vector<std::vector<cplx>> kets(m, std::vector<cplx>(d, 0.0));
  const auto stride = detail::subsystem_strides(dims);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<cplx>& ket = kets[i];
    ket.assign(d, 1.0);
    for (std::size_t idx = 0; idx < d; ++idx) {
      cplx v = 1.0;
      std::size_t rem = idx;
      for (std::size_t s = 0; s < dims.size(); ++s) {
        const std::size_t comp = rem / stride[s];
        rem %= stride[s];
        v *= bases[s](comp, i);
      }
      ket[idx] = v;
    }
  }
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const cplx w = sigma(i, j);
      if (w == cplx(0.0, 0.0)) continue;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) rho(r, c) += w * kets[i][r] * std::conj(kets[j][c]);
    }
  return DensityMatrix(std::move(rho), PartitionSpec(dims));
}

/// Strictly classically correlated state: a probability tensor over a product
/// basis. probs is flat, indexed lexicographically by per-subsystem outcome.
inline DensityMatrix classical_state(std::span<const double> probs,
                                     const std::vector<ComplexMatrix>& bases) {
  if (bases.empty()) throw invalid_state_error("classical state: no subsystem bases");
  std::vector<std::size_t> dims;
  for (const ComplexMatrix& b : bases) {
    if (!b.square() || unitarity_defect(b) > 1e-9)
      throw invalid_state_error("classical state: basis not unitary");
    dims.push_back(b.rows());
  }
  const std::size_t d = detail::product(dims);
  if (probs.size() != d) throw invalid_state_error("classical state: probability tensor size mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw invalid_state_error("classical state: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw invalid_state_error("classical state: probabilities do not sum to 1");

  const auto stride = detail::subsystem_strides(dims);
  ComplexMatrix rho(d, d);
  for (std::size_t flat = 0; flat < d; ++flat) {
    const double p = std::max(probs[flat], 0.0);
    if (p == 0.0) continue;
    // |a_l b_m ... c_n> for this outcome tuple.
    std::vector<cplx> ket(d);
    for (std::size_t idx = 0; idx < d; ++idx) {
      cplx v = 1.0;
      std::size_t rem_i = idx, rem_o = flat;
      for (std::size_t s = 0; s < dims.size(); ++s) {
        const std::size_t comp = rem_i / stride[s];
        const std::size_t outc = rem_o / stride[s];
        rem_i %= stride[s];
        rem_o %= stride[s];
        v *= bases[s](comp, outc);
      }
      ket[idx] = v;
    }
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) rho(r, c) += p * ket[r] * std::conj(ket[c]);
  }
  return DensityMatrix(std::move(rho), PartitionSpec(dims));
}

inline DensityMatrix classical_state(std::span<const double> probs,
                                     std::span<const std::size_t> dims) {
  std::vector<ComplexMatrix> bases;
  for (std::size_t d : dims) bases.push_back(ComplexMatrix::identity(d));
  return classical_state(probs, bases);
}

/// The two-qubit mixture (|00><00| + |1+><1+|)/2: separable, S_vn = 1 bit,
/// but not diagonal in any product basis.
inline DensityMatrix example_b_state() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<cplx> zero_zero = {1.0, 0.0, 0.0, 0.0};
  std::vector<cplx> one_plus = {0.0, 0.0, r, r};
  ComplexMatrix rho(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      rho(i, j) = 0.5 * (zero_zero[i] * std::conj(zero_zero[j]) + one_plus[i] * std::conj(one_plus[j]));
  return DensityMatrix(std::move(rho), PartitionSpec({2, 2}, {"A", "B"}));
}

/// Ginibre-induced random density matrix of the given rank, deterministic in
/// the seed. Partitioned as a single subsystem; repartition as needed.
inline DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  Rng rng = Rng::stream(seed, 0x6d656e73ull);
  const ComplexMatrix g = ginibre_matrix(dim, rank, rng);
  ComplexMatrix rho(dim, dim);
  double tr = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < rank; ++k) sum += g(i, k) * std::conj(g(j, k));
      rho(i, j) = sum;
      if (i == j) tr += std::real(sum);
    }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) rho(i, j) /= tr;
  // Exact Hermitian symmetrization so validation tolerances never bite.
  for (std::size_t i = 0; i < dim; ++i) {
    rho(i, i) = cplx(std::real(rho(i, i)), 0.0);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = v;
      rho(j, i) = std::conj(v);
    }
  }
  return DensityMatrix(std::move(rho), PartitionSpec({dim}));
}

/// Haar-random pure state on the given partition.
inline PureState random_pure(const PartitionSpec& partition, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0x70757265ull);
  const std::size_t d = partition.total_dim();
  std::vector<cplx> amps(d);
  double n = 0.0;
  for (cplx& a : amps) {
    a = rng.complex_gaussian();
    n += std::norm(a);
  }
  n = std::sqrt(n);
  for (cplx& a : amps) a /= n;
  return PureState(std::move(amps), partition);
}

namespace detail {

inline std::vector<std::size_t> permuted_index_map(std::span<const std::size_t> dims,
                                                   std::span<const std::size_t> perm) {
  // result[new_flat] = old_flat where new subsystem s is old subsystem perm[s]
  const std::size_t n = dims.size();
  std::vector<std::size_t> new_dims(n);
  for (std::size_t s = 0; s < n; ++s) new_dims[s] = dims[perm[s]];
  const auto old_stride = subsystem_strides(dims);
  const auto new_stride = subsystem_strides(new_dims);
  const std::size_t d = product(dims);
  std::vector<std::size_t> map(d);
  for (std::size_t idx = 0; idx < d; ++idx) {
    std::size_t rem = idx, old_idx = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t comp = rem / new_stride[s];
      rem %= new_stride[s];
      old_idx += comp * old_stride[perm[s]];
    }
    map[idx] = old_idx;
  }
  return map;
}

}  // namespace detail

/// Reorder tensor factors: new subsystem s is old subsystem perm[s].
inline PureState permute_subsystems(const PureState& psi, std::span<const std::size_t> perm) {
  if (perm.size() != psi.partition.subsystem_count())
    throw std::invalid_argument("permute_subsystems: bad permutation size");
  const auto map = detail::permuted_index_map(psi.partition.dims, perm);
  std::vector<cplx> amps(psi.dim());
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = psi.amplitudes[map[i]];
  std::vector<std::size_t> new_dims(perm.size());
  std::vector<std::string> new_labels;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    new_dims[s] = psi.partition.dims[perm[s]];
    if (!psi.partition.labels.empty()) new_labels.push_back(psi.partition.labels[perm[s]]);
  }
  return PureState(std::move(amps), PartitionSpec(new_dims, new_labels));
}

inline DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> perm) {
  if (perm.size() != rho.partition().subsystem_count())
    throw std::invalid_argument("permute_subsystems: bad permutation size");
  const auto map = detail::permuted_index_map(rho.dims(), perm);
  const std::size_t d = rho.dim();
  ComplexMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = rho.matrix()(map[i], map[j]);
  std::vector<std::size_t> new_dims(perm.size());
  std::vector<std::string> new_labels;
  for (std::size_t s = 0; s < perm.size(); ++s) {
    new_dims[s] = rho.partition().dims[perm[s]];
    if (!rho.partition().labels.empty()) new_labels.push_back(rho.partition().labels[perm[s]]);
  }
  return DensityMatrix(out, PartitionSpec(new_dims, new_labels));
}

/// Regroup subsystems into coarser parts. `groups` lists the original
/// subsystem indices of each new part; factors are permuted so each group is
/// contiguous, then merged. Example: groups {{0,2},{1,3}} on four qubits.
inline DensityMatrix regroup(const DensityMatrix& rho,
                             const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<std::size_t> perm;
  std::vector<std::size_t> group_dims;
  std::vector<bool> seen(rho.partition().subsystem_count(), false);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("regroup: empty group");
    std::size_t gd = 1;
    for (std::size_t s : g) {
      if (s >= seen.size() || seen[s]) throw std::invalid_argument("regroup: bad group index");
      seen[s] = true;
      perm.push_back(s);
      gd *= rho.partition().dims[s];
    }
    group_dims.push_back(gd);
  }
  if (perm.size() != seen.size()) throw std::invalid_argument("regroup: groups must cover all subsystems");
  DensityMatrix permuted = permute_subsystems(rho, perm);
  return permuted.repartitioned(PartitionSpec(group_dims));
}

/// Schmidt decomposition of a bipartite pure state, splitting the subsystem
/// list at `cut` (first group = subsystems [0, cut)). Coefficients descend.
struct SchmidtDecomposition {
  std::vector<double> coefficients;
  ComplexMatrix left_basis;   // columns, one per coefficient
  ComplexMatrix right_basis;  // columns, one per coefficient
};

inline SchmidtDecomposition schmidt_decompose(const PureState& psi, std::size_t cut) {
  const std::size_t n = psi.partition.subsystem_count();
  if (cut == 0 || cut >= n) throw std::invalid_argument("schmidt_decompose: invalid cut");
  std::size_t dl = 1, dr = 1;
  for (std::size_t s = 0; s < cut; ++s) dl *= psi.partition.dims[s];
  for (std::size_t s = cut; s < n; ++s) dr *= psi.partition.dims[s];

  // Coefficient matrix M with psi = sum_{l,r} M(l,r) |l>|r>.
  ComplexMatrix m(dl, dr);
  for (std::size_t l = 0; l < dl; ++l)
    for (std::size_t r = 0; r < dr; ++r) m(l, r) = psi.amplitudes[l * dr + r];

  // Singular values via the Hermitian Gram matrix M M†.
  ComplexMatrix gram(dl, dl);
  for (std::size_t i = 0; i < dl; ++i)
    for (std::size_t j = 0; j < dl; ++j) {
      cplx sum = 0.0;
      for (std::size_t r = 0; r < dr; ++r) sum += m(i, r) * std::conj(m(j, r));
      gram(i, j) = sum;
    }
  const EigenDecomposition eig = hermitian_eigendecomposition(gram);

  const std::size_t k = std::min(dl, dr);
  SchmidtDecomposition out;
  out.coefficients.resize(k);
  out.left_basis = ComplexMatrix(dl, k);
  out.right_basis = ComplexMatrix(dr, k);
  for (std::size_t c = 0; c < k; ++c) {
    const double lam = std::max(eig.eigenvalues[c], 0.0);
    const double s = std::sqrt(lam);
    out.coefficients[c] = s;
    for (std::size_t i = 0; i < dl; ++i) out.left_basis(i, c) = eig.eigenvectors(i, c);
    if (s > 1e-9) {
      // v = M† u / s
      for (std::size_t r = 0; r < dr; ++r) {
        cplx sum = 0.0;
        for (std::size_t i = 0; i < dl; ++i) sum += std::conj(m(i, r)) * eig.eigenvectors(i, c);
        out.right_basis(r, c) = std::conj(sum) / s;
      }
    }
  }
  // Complete right-basis columns for vanishing coefficients so the basis
  // stays orthonormal: Gram-Schmidt against earlier columns.
  for (std::size_t c = 0; c < k; ++c) {
    if (out.coefficients[c] > 1e-9) continue;
    for (std::size_t cand = 0; cand < dr; ++cand) {
      std::vector<cplx> v(dr, 0.0);
      v[cand] = 1.0;
      for (std::size_t prev = 0; prev < k; ++prev) {
        if (prev == c || (out.coefficients[prev] <= 1e-9 && prev > c)) continue;
        cplx dot = 0.0;
        for (std::size_t r = 0; r < dr; ++r) dot += std::conj(out.right_basis(r, prev)) * v[r];
        for (std::size_t r = 0; r < dr; ++r) v[r] -= dot * out.right_basis(r, prev);
      }
      double nrm = 0.0;
      for (const cplx& z : v) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 1e-6) {
        for (std::size_t r = 0; r < dr; ++r) out.right_basis(r, c) = v[r] / nrm;
        break;
      }
    }
  }
  return out;
}

}  // namespace qce
