#pragma once

#include <cstring>
#include <vector>

#include "qce/coarse_graining.hpp"
#include "qce/entropy.hpp"
#include "qce/rng.hpp"
#include "qce/states.hpp"

namespace qce {

/// Multi-start derivative-free search settings. Defaults are tuned for
/// systems up to a few qubits; results are deterministic given the seed.
struct OptimizerConfig {
  std::size_t restarts = 32;
  std::size_t max_sweeps = 240;       // coordinate sweeps per restart
  double objective_tolerance = 1e-9;  // bits; smaller gains do not reset the schedule
  double step_initial = 0.5;          // radians
  double step_final = 1e-6;           // radians
  std::uint64_t seed = 0;

  void check() const {
    if (restarts < 1) throw std::invalid_argument("optimizer: restarts < 1");
    if (objective_tolerance <= 0.0 || step_initial <= 0.0 || step_final <= 0.0 ||
        step_final > step_initial)
      throw std::invalid_argument("optimizer: invalid tolerances or step schedule");
  }
};

struct OptimizationResult {
  double value = 0.0;
  LocalBasisPoint argmin;
  std::vector<std::vector<double>> argmin_params;  // one block per subsystem
  std::vector<double> best_per_restart;
  std::vector<std::size_t> iterations_used;
  bool converged = false;
};

inline std::size_t unitary_param_count(std::size_t dim) { return dim * dim; }

/// Hermitian generator from dim^2 real parameters: the first dim entries are
/// the diagonal, the rest are (re, im) pairs for the upper triangle row by row.
inline ComplexMatrix hermitian_from_params(std::span<const double> params, std::size_t dim) {
  if (params.size() != unitary_param_count(dim))
    throw std::invalid_argument("hermitian_from_params: wrong parameter count");
  ComplexMatrix h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = params[i];
  std::size_t k = dim;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx v(params[k], params[k + 1]);
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  return h;
}

/// exp(i H(params)): a smooth chart covering the whole unitary group.
inline ComplexMatrix unitary_from_params(std::span<const double> params, std::size_t dim) {
  if (params.size() != unitary_param_count(dim))
    throw std::invalid_argument("unitary_from_params: wrong parameter count");
  if (dim == 2) {
    // exp(i(c0 I + v.sigma)) in closed form
    const double c0 = 0.5 * (params[0] + params[1]);
    const double vz = 0.5 * (params[0] - params[1]);
    const double vx = params[2];
    const double vy = -params[3];
    const double r = std::sqrt(vx * vx + vy * vy + vz * vz);
    const cplx phase(std::cos(c0), std::sin(c0));
    ComplexMatrix u(2, 2);
    if (r < 1e-300) {
      u(0, 0) = phase;
      u(1, 1) = phase;
      return u;
    }
    const double cr = std::cos(r);
    const double snc = std::sin(r) / r;
    u(0, 0) = phase * cplx(cr, vz * snc);
    u(0, 1) = phase * cplx(vy * snc, vx * snc);
    u(1, 0) = phase * cplx(-vy * snc, vx * snc);
    u(1, 1) = phase * cplx(cr, -vz * snc);
    return u;
  }
  return unitary_exp_ih(hermitian_from_params(params, dim));
}

namespace detail {

/// Shared scratch for measuring a fixed state in varying local bases.
class LocalRotationEngine {
 public:
  LocalRotationEngine(const ComplexMatrix& rho, std::vector<std::size_t> dims)
      : rho_(&rho), dims_(std::move(dims)) {
    for (std::size_t d : dims_) adjoints_.emplace_back(d, d);
  }

  const std::vector<std::size_t>& dims() const { return dims_; }

  /// Diagonal of (U_1 ⊗ ... ⊗ U_N)† rho (U_1 ⊗ ... ⊗ U_N), clipped to >= 0.
  void probabilities(std::span<const ComplexMatrix> unitaries, std::vector<double>& out) {
    work_ = *rho_;
    for (std::size_t s = 0; s < dims_.size(); ++s) {
      ComplexMatrix& adj = adjoints_[s];
      const ComplexMatrix& u = unitaries[s];
      for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j) adj(j, i) = std::conj(u(i, j));
      local_left_apply(work_, dims_, s, adj, scratch_);
      local_right_apply(work_, dims_, s, u, scratch_);
    }
    const std::size_t d = rho_->rows();
    out.resize(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = std::max(std::real(work_(i, i)), 0.0);
  }

 private:
  const ComplexMatrix* rho_;
  std::vector<std::size_t> dims_;
  std::vector<ComplexMatrix> adjoints_;
  ComplexMatrix work_;
  std::vector<cplx> scratch_;
};

/// Per-subsystem parameter blocks with cached unitaries, so a coordinate move
/// only rebuilds the block it touched.
class BlockedUnitaries {
 public:
  explicit BlockedUnitaries(const std::vector<std::size_t>& dims) : dims_(dims) {
    for (std::size_t d : dims) {
      block_sizes_.push_back(unitary_param_count(d));
      cached_.emplace_back(block_sizes_.back(), std::numeric_limits<double>::quiet_NaN());
      unitaries_.push_back(ComplexMatrix::identity(d));
    }
  }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t b : block_sizes_) n += b;
    return n;
  }

  const std::vector<std::size_t>& block_sizes() const { return block_sizes_; }

  void refresh(std::span<const double> flat) {
    std::size_t offset = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s) {
      const std::size_t nb = block_sizes_[s];
      const double* blk = flat.data() + offset;
      if (std::memcmp(blk, cached_[s].data(), nb * sizeof(double)) != 0) {
        std::memcpy(cached_[s].data(), blk, nb * sizeof(double));
        unitaries_[s] = unitary_from_params(std::span<const double>(blk, nb), dims_[s]);
      }
      offset += nb;
    }
  }

  std::span<const ComplexMatrix> unitaries() const { return unitaries_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> block_sizes_;
  std::vector<std::vector<double>> cached_;
  std::vector<ComplexMatrix> unitaries_;
};

/// Shannon entropy (bits) of the outcome distribution in the rotated product
/// basis: the quantity the search minimizes.
class LocalEntropyObjective {
 public:
  explicit LocalEntropyObjective(const DensityMatrix& rho)
      : engine_(rho.matrix(), std::vector<std::size_t>(rho.dims().begin(), rho.dims().end())),
        blocks_(engine_.dims()) {}

  std::size_t param_count() const { return blocks_.param_count(); }
  const std::vector<std::size_t>& block_sizes() const { return blocks_.block_sizes(); }

  double operator()(std::span<const double> flat) {
    blocks_.refresh(flat);
    engine_.probabilities(blocks_.unitaries(), probs_);
    return entropy_of_probs(probs_);
  }

 private:
  LocalRotationEngine engine_;
  BlockedUnitaries blocks_;
  std::vector<double> probs_;
};

/// Negated measurement mutual information for a bipartite state (negated so
/// the same minimizer maximizes it).
class NegatedMutualInfoObjective {
 public:
  explicit NegatedMutualInfoObjective(const DensityMatrix& rho)
      : engine_(rho.matrix(), std::vector<std::size_t>(rho.dims().begin(), rho.dims().end())),
        blocks_(engine_.dims()),
        da_(engine_.dims()[0]),
        db_(engine_.dims()[1]) {
    if (engine_.dims().size() != 2)
      throw std::invalid_argument("mutual information search: state is not bipartite");
  }

  std::size_t param_count() const { return blocks_.param_count(); }
  const std::vector<std::size_t>& block_sizes() const { return blocks_.block_sizes(); }

  double operator()(std::span<const double> flat) {
    blocks_.refresh(flat);
    engine_.probabilities(blocks_.unitaries(), probs_);
    pa_.assign(da_, 0.0);
    pb_.assign(db_, 0.0);
    for (std::size_t l = 0; l < da_; ++l)
      for (std::size_t m = 0; m < db_; ++m) {
        pa_[l] += probs_[l * db_ + m];
        pb_[m] += probs_[l * db_ + m];
      }
    return entropy_of_probs(probs_) - entropy_of_probs(pa_) - entropy_of_probs(pb_);
  }

 private:
  LocalRotationEngine engine_;
  BlockedUnitaries blocks_;
  std::size_t da_, db_;
  std::vector<double> probs_;
  std::vector<double> pa_, pb_;
};

struct SearchOutcome {
  double value = 0.0;
  std::vector<double> params;
  std::vector<double> best_per_restart;
  std::vector<std::size_t> sweeps_used;
  bool converged = false;
};

/// Seeded multi-start adaptive coordinate descent. Each restart draws its own
/// start from an independent stream of (seed, restart), walks coordinates with
/// +-step probes, and halves the step after a sweep with no improvement above
/// the objective tolerance. The merged result never depends on restart order.
template <class F>
SearchOutcome multistart_coordinate_descent(F& objective, std::size_t param_count,
                                            const OptimizerConfig& cfg) {
  cfg.check();
  SearchOutcome out;
  out.value = std::numeric_limits<double>::infinity();
  out.converged = true;
  constexpr double pi = 3.14159265358979323846;

  std::vector<double> x(param_count);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = Rng::stream(cfg.seed, r);
    for (double& xi : x) xi = rng.uniform(-pi, pi);
    double value = objective(x);
    double step = cfg.step_initial;
    std::size_t sweeps = 0;
    std::size_t level_sweeps = 0;
    std::vector<double> sweep_start(param_count);
    std::vector<double> probe(param_count);
    while (step >= cfg.step_final && sweeps < cfg.max_sweeps) {
      bool significant = false;
      bool moved = false;
      sweep_start = x;
      for (std::size_t i = 0; i < param_count; ++i) {
        const double xi = x[i];
        x[i] = xi + step;
        const double up = objective(x);
        if (up < value) {
          if (value - up > cfg.objective_tolerance) significant = true;
          value = up;
          moved = true;
          continue;
        }
        x[i] = xi - step;
        const double down = objective(x);
        if (down < value) {
          if (value - down > cfg.objective_tolerance) significant = true;
          value = down;
          moved = true;
          continue;
        }
        x[i] = xi;
      }
      if (moved) {
        // pattern probe: repeat the aggregate sweep displacement, which
        // accelerates progress along diagonal valleys
        for (std::size_t i = 0; i < param_count; ++i) probe[i] = 2.0 * x[i] - sweep_start[i];
        const double pv = objective(probe);
        if (pv < value) {
          if (value - pv > cfg.objective_tolerance) significant = true;
          value = pv;
          x = probe;
        }
      }
      ++sweeps;
      ++level_sweeps;
      // Halve once progress above tolerance stops; a level cap keeps the
      // schedule geometric even along near-flat valleys.
      if (!significant || level_sweeps >= 8) {
        step *= 0.5;
        level_sweeps = 0;
      }
    }
    out.best_per_restart.push_back(value);
    out.sweeps_used.push_back(sweeps);
    if (step >= cfg.step_final) out.converged = false;  // stopped by the sweep cap
    if (value < out.value) {
      out.value = value;
      out.params = x;
    }
  }
  return out;
}

inline std::vector<std::vector<double>> split_blocks(std::span<const double> flat,
                                                     const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<double>> blocks;
  std::size_t offset = 0;
  for (std::size_t nb : sizes) {
    blocks.emplace_back(flat.begin() + offset, flat.begin() + offset + nb);
    offset += nb;
  }
  return blocks;
}

}  // namespace detail

/// Joint measurement entropy (bits) in the rotated product basis given one
/// parameter block per subsystem.
inline double local_objective(const DensityMatrix& rho,
                              const std::vector<std::vector<double>>& params_per_subsystem) {
  if (params_per_subsystem.size() != rho.partition().subsystem_count())
    throw std::invalid_argument("local_objective: one parameter block per subsystem required");
  std::vector<double> flat;
  for (std::size_t s = 0; s < params_per_subsystem.size(); ++s) {
    if (params_per_subsystem[s].size() != unitary_param_count(rho.dims()[s]))
      throw std::invalid_argument("local_objective: block size must be dim^2");
    flat.insert(flat.end(), params_per_subsystem[s].begin(), params_per_subsystem[s].end());
  }
  detail::LocalEntropyObjective obj(rho);
  return obj(flat);
}

/// Same objective evaluated directly at a basis point.
inline double local_objective(const DensityMatrix& rho, const LocalBasisPoint& point) {
  point.check();
  if (point.dims() != std::vector<std::size_t>(rho.dims().begin(), rho.dims().end()))
    throw std::invalid_argument("local_objective: basis point does not match partition");
  detail::LocalRotationEngine engine(
      rho.matrix(), std::vector<std::size_t>(rho.dims().begin(), rho.dims().end()));
  std::vector<double> probs;
  engine.probabilities(point.unitaries, probs);
  return detail::entropy_of_probs(probs);
}

/// Minimum joint measurement entropy over rank-1 local coarse-grainings,
/// found by seeded multi-start coordinate descent.
inline OptimizationResult minimize_local_entropy(const DensityMatrix& rho,
                                                 const OptimizerConfig& cfg = {}) {
  detail::LocalEntropyObjective obj(rho);
  detail::SearchOutcome sr = detail::multistart_coordinate_descent(obj, obj.param_count(), cfg);
  OptimizationResult res;
  if (sr.value < -1e-9) throw internal_error("minimize_local_entropy: negative entropy");
  res.value = std::max(sr.value, 0.0);
  res.best_per_restart = std::move(sr.best_per_restart);
  res.iterations_used = std::move(sr.sweeps_used);
  res.converged = sr.converged;
  res.argmin_params = detail::split_blocks(sr.params, obj.block_sizes());
  for (std::size_t s = 0; s < res.argmin_params.size(); ++s)
    res.argmin.unitaries.push_back(unitary_from_params(res.argmin_params[s], rho.dims()[s]));
  return res;
}

struct QcEntropyResult {
  double value = 0.0;          // bits
  double von_neumann = 0.0;    // bits
  OptimizationResult optimization;
};

/// Quantum correlation entropy: the entropy gap between the best local
/// measurement and the state's own eigenbasis measurement.
inline QcEntropyResult qc_entropy(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  QcEntropyResult out;
  out.optimization = minimize_local_entropy(rho, cfg);
  out.von_neumann = von_neumann_entropy(rho);
  const double gap = out.optimization.value - out.von_neumann;
  if (gap < -1e-9) throw internal_error("qc_entropy: local minimum below von Neumann entropy");
  out.value = std::max(gap, 0.0);
  return out;
}

/// Entanglement entropy of a bipartite pure state: Shannon entropy of the
/// squared Schmidt coefficients. No search needed.
inline double qc_bipartite_pure(const PureState& psi, std::size_t cut) {
  const SchmidtDecomposition sd = schmidt_decompose(psi, cut);
  std::vector<double> probs;
  for (double c : sd.coefficients) probs.push_back(c * c);
  return detail::entropy_of_probs(probs);
}

/// Closed form for maximally correlated states: Shannon entropy of the
/// coefficient diagonal minus the entropy of the coefficient spectrum.
inline double qc_maximally_correlated(const ComplexMatrix& sigma) {
  if (!sigma.square()) throw std::invalid_argument("qc_maximally_correlated: sigma not square");
  if (sigma.hermiticity_defect() > 1e-10)
    throw std::invalid_argument("qc_maximally_correlated: sigma not Hermitian");
  if (std::abs(sigma.trace() - cplx(1.0, 0.0)) > 1e-10)
    throw std::invalid_argument("qc_maximally_correlated: diagonal does not sum to 1");
  const EigenDecomposition eig = hermitian_eigendecomposition(sigma);
  if (eig.eigenvalues.back() < -1e-8)
    throw std::invalid_argument("qc_maximally_correlated: sigma not positive semidefinite");
  std::vector<double> diag;
  for (std::size_t i = 0; i < sigma.rows(); ++i) diag.push_back(std::max(std::real(sigma(i, i)), 0.0));
  std::vector<double> spectrum;
  for (double l : eig.eigenvalues) spectrum.push_back(std::max(l, 0.0));
  return detail::entropy_of_probs(diag) - detail::entropy_of_probs(spectrum);
}

/// Lower bound from a marginal: S_vn(rho_kept) - S_vn(rho), clipped at zero.
inline double qc_lower_bound(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  if (keep.empty() || keep.size() >= rho.partition().subsystem_count())
    throw std::invalid_argument("qc_lower_bound: keep must be a nonempty proper subset");
  const double bound = von_neumann_entropy(rho.reduced(keep)) - von_neumann_entropy(rho);
  return std::max(bound, 0.0);
}

/// Upper bound: sum of single-subsystem entropies minus the global entropy.
inline double qc_upper_bound(const DensityMatrix& rho) {
  double sum = 0.0;
  for (std::size_t s = 0; s < rho.partition().subsystem_count(); ++s) {
    std::size_t keep[1] = {s};
    sum += von_neumann_entropy(rho.reduced(keep));
  }
  return sum - von_neumann_entropy(rho);
}

/// Supremum of the joint-measurement mutual information over rank-1 local
/// coarse-grainings of a bipartite state.
inline double classical_mutual_information(const DensityMatrix& rho,
                                           const OptimizerConfig& cfg = {}) {
  detail::NegatedMutualInfoObjective obj(rho);
  detail::SearchOutcome sr = detail::multistart_coordinate_descent(obj, obj.param_count(), cfg);
  return std::max(-sr.value, 0.0);
}

/// I_qm - I_cl; the correlation entropy is bounded below by this difference.
inline double mutual_info_gap(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  return quantum_mutual_information(rho) - classical_mutual_information(rho, cfg);
}

/// Entropy gap of the particular local coarse-graining built from the
/// (rank-1 refined) eigenbases of the two marginals.
inline double eigenbasis_product_value(const DensityMatrix& rho, double degeneracy_tol = 1e-8) {
  if (rho.partition().subsystem_count() != 2)
    throw std::invalid_argument("eigenbasis_product_value: state is not bipartite");
  LocalCoarseGraining local;
  local.partition = rho.partition();
  for (std::size_t s = 0; s < 2; ++s) {
    std::size_t keep[1] = {s};
    local.factors.push_back(refine_to_rank1(eigenbasis_cg(rho.reduced(keep), degeneracy_tol)));
  }
  return observational_entropy(rho, product_cg(local)) - von_neumann_entropy(rho);
}

struct ClassicalityVerdict {
  bool classical = false;
  double qc_value = 0.0;
  double dephasing_defect = 0.0;  // max |dephased - original| at the argmin
  LocalBasisPoint witness;
};

/// A state is classically correlated iff some product basis diagonalizes it;
/// checks that the searched-out basis does, within 10x the entropy threshold.
inline ClassicalityVerdict is_classically_correlated(const DensityMatrix& rho,
                                                     const QcEntropyResult& qc,
                                                     double threshold = 1e-6) {
  ClassicalityVerdict v;
  v.qc_value = qc.value;
  v.witness = qc.optimization.argmin;
  v.dephasing_defect = (dephase(rho, v.witness).matrix() - rho.matrix()).max_abs();
  v.classical = qc.value < threshold && v.dephasing_defect < 10.0 * threshold;
  return v;
}

inline ClassicalityVerdict is_classically_correlated(const DensityMatrix& rho,
                                                     const OptimizerConfig& cfg = {},
                                                     double threshold = 1e-6) {
  return is_classically_correlated(rho, qc_entropy(rho, cfg), threshold);
}

namespace detail {

struct QubitBasis {
  cplx u0[2];
  cplx u1[2];
};

inline QubitBasis axis_basis(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const cplx e(std::cos(phi), std::sin(phi));
  QubitBasis b;
  b.u0[0] = c;
  b.u0[1] = e * s;
  b.u1[0] = s;
  b.u1[1] = -e * c;
  return b;
}

inline std::vector<QubitBasis> axis_grid() {
  // Swapping the two outcomes maps an axis to its antipode and leaves the
  // measurement unchanged, so the upper hemisphere covers every basis.
  constexpr std::size_t n_theta = 40, n_phi = 40;
  constexpr double pi = 3.14159265358979323846;
  std::vector<QubitBasis> grid;
  grid.reserve(n_theta * n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = 0.5 * pi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_phi);
      grid.push_back(axis_basis(theta, phi));
    }
  }
  return grid;
}

inline double entropy2(double p0, double p1) {
  double s = 0.0;
  if (p0 > 1e-14) s -= p0 * std::log2(p0);
  if (p1 > 1e-14) s -= p1 * std::log2(p1);
  return s;
}

inline double quad2(const cplx m[2][2], const cplx v[2]) {
  return std::real(std::conj(v[0]) * (m[0][0] * v[0] + m[0][1] * v[1]) +
                   std::conj(v[1]) * (m[1][0] * v[0] + m[1][1] * v[1]));
}

inline double one_qubit_axis_entropy(const ComplexMatrix& rho, const QubitBasis& b) {
  const double p0 =
      std::real(std::conj(b.u0[0]) * (rho(0, 0) * b.u0[0] + rho(0, 1) * b.u0[1]) +
                std::conj(b.u0[1]) * (rho(1, 0) * b.u0[0] + rho(1, 1) * b.u0[1]));
  return entropy2(std::max(p0, 0.0), std::max(1.0 - p0, 0.0));
}

inline double two_qubit_axis_entropy(const ComplexMatrix& rho, const cplx rho_b[2][2],
                                     const QubitBasis& a, const QubitBasis& b) {
  cplx r0[2][2];
  for (std::size_t b0 = 0; b0 < 2; ++b0)
    for (std::size_t b1 = 0; b1 < 2; ++b1) {
      cplx sum = 0.0;
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
          sum += std::conj(a.u0[x]) * rho(x * 2 + b0, y * 2 + b1) * a.u0[y];
      r0[b0][b1] = sum;
    }
  const cplx r1[2][2] = {{rho_b[0][0] - r0[0][0], rho_b[0][1] - r0[0][1]},
                         {rho_b[1][0] - r0[1][0], rho_b[1][1] - r0[1][1]}};
  const double p00 = std::max(quad2(r0, b.u0), 0.0);
  const double p01 = std::max(quad2(r0, b.u1), 0.0);
  const double p10 = std::max(quad2(r1, b.u0), 0.0);
  const double p11 = std::max(quad2(r1, b.u1), 0.0);
  double s = 0.0;
  if (p00 > 1e-14) s -= p00 * std::log2(p00);
  if (p01 > 1e-14) s -= p01 * std::log2(p01);
  if (p10 > 1e-14) s -= p10 * std::log2(p10);
  if (p11 > 1e-14) s -= p11 * std::log2(p11);
  return s;
}

/// Exhaustive measurement-axis grid for one- and two-qubit partitions,
/// sharpened by a deterministic angle-space descent from the best grid
/// point. The value upper-bounds the true minimum and involves no RNG.
inline double qubit_grid_min_entropy(const ComplexMatrix& rho, std::size_t n_qubits) {
  const std::vector<QubitBasis> grid = axis_grid();
  constexpr double pi = 3.14159265358979323846;
  constexpr std::size_t n_theta = 40, n_phi = 40;
  double best = std::numeric_limits<double>::infinity();

  if (n_qubits == 1) {
    std::size_t best_i = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double s = one_qubit_axis_entropy(rho, grid[g]);
      if (s < best) {
        best = s;
        best_i = g;
      }
    }
    double angles[2] = {0.5 * pi * static_cast<double>(best_i / n_phi) / (n_theta - 1),
                        2.0 * pi * static_cast<double>(best_i % n_phi) / n_phi};
    auto eval = [&](const double* x) { return one_qubit_axis_entropy(rho, axis_basis(x[0], x[1])); };
    double step = 0.5 * pi / (n_theta - 1);
    std::size_t budget = 20000;
    while (step > 1e-5 && budget > 0) {
      --budget;
      bool improved = false;
      for (std::size_t i = 0; i < 2; ++i) {
        for (double sign : {1.0, -1.0}) {
          double trial[2] = {angles[0], angles[1]};
          trial[i] += sign * step;
          const double v = eval(trial);
          if (v < best) {
            best = v;
            angles[i] = trial[i];
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return best;
  }

  const cplx rho_b[2][2] = {{rho(0, 0) + rho(2, 2), rho(0, 1) + rho(2, 3)},
                            {rho(1, 0) + rho(3, 2), rho(1, 1) + rho(3, 3)}};
  std::size_t best_a = 0, best_b = 0;
  for (std::size_t ga = 0; ga < grid.size(); ++ga)
    for (std::size_t gb = 0; gb < grid.size(); ++gb) {
      const double s = two_qubit_axis_entropy(rho, rho_b, grid[ga], grid[gb]);
      if (s < best) {
        best = s;
        best_a = ga;
        best_b = gb;
      }
    }
  double angles[4] = {0.5 * pi * static_cast<double>(best_a / n_phi) / (n_theta - 1),
                      2.0 * pi * static_cast<double>(best_a % n_phi) / n_phi,
                      0.5 * pi * static_cast<double>(best_b / n_phi) / (n_theta - 1),
                      2.0 * pi * static_cast<double>(best_b % n_phi) / n_phi};
  auto eval = [&](const double* x) {
    return two_qubit_axis_entropy(rho, rho_b, axis_basis(x[0], x[1]), axis_basis(x[2], x[3]));
  };
  double step = 0.5 * pi / (n_theta - 1);
  std::size_t budget = 20000;
  while (step > 1e-5 && budget > 0) {
    --budget;
    bool improved = false;
    for (std::size_t i = 0; i < 4; ++i) {
      for (double sign : {1.0, -1.0}) {
        double trial[4] = {angles[0], angles[1], angles[2], angles[3]};
        trial[i] += sign * step;
        const double v = eval(trial);
        if (v < best) {
          best = v;
          angles[i] = trial[i];
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace detail

/// Independent check of the searched minimum: Haar-random local basis points
/// plus, for partitions of at most two qubits, a deterministic sweep over
/// per-qubit measurement axes. Upper-bounds the true correlation entropy.
inline double brute_force_qc(const DensityMatrix& rho, std::size_t samples, std::uint64_t seed) {
  if (rho.dim() > 16) throw std::invalid_argument("brute_force_qc: dimension above 16");
  const std::vector<std::size_t> dims(rho.dims().begin(), rho.dims().end());
  detail::LocalRotationEngine engine(rho.matrix(), dims);
  Rng rng = Rng::stream(seed, 0xb407ce0ull);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> probs;
  std::vector<ComplexMatrix> point(dims.size(), ComplexMatrix());
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t s = 0; s < dims.size(); ++s) point[s] = haar_unitary(dims[s], rng);
    engine.probabilities(point, probs);
    best = std::min(best, detail::entropy_of_probs(probs));
  }
  const bool all_qubits = std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 2; });
  if (all_qubits && dims.size() <= 2)
    best = std::min(best, detail::qubit_grid_min_entropy(rho.matrix(), dims.size()));
  const double gap = best - von_neumann_entropy(rho);
  if (gap < -1e-9) throw internal_error("brute_force_qc: entropy gap negative");
  return std::max(gap, 0.0);
}

}  // namespace qce
