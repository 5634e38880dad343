#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "qce/coarse_graining.hpp"
#include "qce/complex_matrix.hpp"
#include "qce/states.hpp"

namespace qce {

/// All entropies default to bits; natural log is available for cross-checks.
enum class LogBase { two, e };

namespace detail {

inline double log_of(double x, LogBase base) {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

/// -sum p log p with the 0 log 0 = 0 convention (cut at 1e-14), no input
/// validation. The hot path for the optimizer.
inline double entropy_of_probs(std::span<const double> p, LogBase base = LogBase::two) {
  double s = 0.0;
  if (base == LogBase::two) {
    for (double x : p)
      if (x > 1e-14) s -= x * std::log2(x);
  } else {
    for (double x : p)
      if (x > 1e-14) s -= x * std::log(x);
  }
  return s;
}

}  // namespace detail

/// Shannon entropy of a probability distribution. Entries below -1e-12 or a
/// total off 1 by more than 1e-9 are rejected.
inline double shannon_entropy(std::span<const double> p, LogBase base = LogBase::two) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -1e-12) throw std::invalid_argument("shannon_entropy: negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("shannon_entropy: probabilities do not sum to 1");
  return detail::entropy_of_probs(p, base);
}

/// Shannon entropy of the spectrum.
inline double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::two) {
  const EigenDecomposition eig = hermitian_eigendecomposition(rho.matrix());
  return detail::entropy_of_probs(eig.eigenvalues, base);
}

/// Outcome statistics of measuring a coarse-graining: probabilities
/// p_i = tr(P_i rho) and integer volumes V_i = tr(P_i).
struct MeasurementDistribution {
  std::vector<double> probabilities;
  std::vector<std::size_t> volumes;
  std::vector<std::vector<std::size_t>> labels;  // multi-index per outcome
};

inline MeasurementDistribution measurement_distribution(const DensityMatrix& rho,
                                                        const CoarseGraining& cg) {
  if (cg.dim != rho.dim())
    throw std::invalid_argument("measurement_distribution: dimension mismatch");
  MeasurementDistribution out;
  double total = 0.0;
  for (std::size_t i = 0; i < cg.projectors.size(); ++i) {
    const ComplexMatrix& p = cg.projectors[i];
    cplx prob = 0.0;
    double vol = 0.0;
    for (std::size_t r = 0; r < cg.dim; ++r) {
      vol += std::real(p(r, r));
      for (std::size_t c = 0; c < cg.dim; ++c) prob += p(r, c) * rho.matrix()(c, r);
    }
    const double v_round = std::round(vol);
    if (std::abs(vol - v_round) > 1e-8 || v_round < 1.0)
      throw std::invalid_argument("measurement_distribution: projector volume not a positive integer");
    double pr = std::real(prob);
    if (pr < -1e-12)
      throw std::invalid_argument("measurement_distribution: negative outcome probability");
    if (pr < 0.0) pr = 0.0;
    total += pr;
    out.probabilities.push_back(pr);
    out.volumes.push_back(static_cast<std::size_t>(v_round));
    out.labels.push_back({i});
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("measurement_distribution: probabilities do not sum to 1");
  return out;
}

/// Coarse-grained entropy -sum_i p_i log(p_i / V_i) of the distribution.
inline double observational_entropy(const MeasurementDistribution& dist,
                                    LogBase base = LogBase::two) {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    const double p = dist.probabilities[i];
    if (p > 1e-14) s -= p * detail::log_of(p / static_cast<double>(dist.volumes[i]), base);
  }
  return s;
}

inline double observational_entropy(const DensityMatrix& rho, const CoarseGraining& cg,
                                    LogBase base = LogBase::two) {
  return observational_entropy(measurement_distribution(rho, cg), base);
}

namespace detail {

/// Joint outcome distribution of a local coarse-graining, labels carrying the
/// factor outcome tuple, in lexicographic factor order.
inline MeasurementDistribution joint_distribution(const DensityMatrix& rho,
                                                  const LocalCoarseGraining& local) {
  if (!(local.partition == rho.partition()))
    throw std::invalid_argument("joint_distribution: partition mismatch");
  MeasurementDistribution joint = measurement_distribution(rho, product_cg(local));
  std::vector<std::size_t> counts;
  for (const CoarseGraining& f : local.factors) counts.push_back(f.projectors.size());
  for (std::size_t flat = 0; flat < joint.labels.size(); ++flat) {
    std::vector<std::size_t> multi(counts.size());
    std::size_t rem = flat;
    for (std::size_t s = counts.size(); s-- > 0;) {
      multi[s] = rem % counts[s];
      rem /= counts[s];
    }
    joint.labels[flat] = std::move(multi);
  }
  return joint;
}

}  // namespace detail

/// Mutual information of the joint local measurement,
/// I = sum p log(p / (p_A p_B ... p_C)), marginals taken on reduced states.
inline double measurement_mutual_information(const DensityMatrix& rho,
                                             const LocalCoarseGraining& local,
                                             LogBase base = LogBase::two) {
  const MeasurementDistribution joint = detail::joint_distribution(rho, local);
  const std::size_t n = local.factors.size();
  std::vector<std::vector<double>> marginal(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t keep[1] = {s};
    const DensityMatrix red = rho.reduced(keep);
    marginal[s] = measurement_distribution(red, local.factors[s]).probabilities;
  }
  double info = 0.0;
  for (std::size_t k = 0; k < joint.probabilities.size(); ++k) {
    const double p = joint.probabilities[k];
    if (p <= 1e-14) continue;
    double denom = 1.0;
    for (std::size_t s = 0; s < n; ++s) denom *= marginal[s][joint.labels[k][s]];
    info += p * detail::log_of(p / denom, base);
  }
  if (info < -1e-9)
    throw internal_error("measurement_mutual_information: negative beyond tolerance");
  return std::max(info, 0.0);
}

/// Residual of the decomposition S_joint = sum_X S_X(rho_X) - I, with both
/// sides evaluated independently. Should vanish to rounding.
inline double product_formula_check(const DensityMatrix& rho, const LocalCoarseGraining& local,
                                    LogBase base = LogBase::two) {
  const double lhs = observational_entropy(rho, product_cg(local), base);
  double marginal_sum = 0.0;
  for (std::size_t s = 0; s < local.factors.size(); ++s) {
    std::size_t keep[1] = {s};
    marginal_sum += observational_entropy(rho.reduced(keep), local.factors[s], base);
  }
  const double rhs = marginal_sum - measurement_mutual_information(rho, local, base);
  return std::abs(lhs - rhs);
}

/// Quantum relative entropy tr(rho log rho - rho log chi). Returns +infinity
/// when rho has weight outside the support of chi.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& chi,
                               LogBase base = LogBase::two) {
  if (rho.dim() != chi.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  const EigenDecomposition rho_eig = hermitian_eigendecomposition(rho.matrix());
  const EigenDecomposition chi_eig = hermitian_eigendecomposition(chi.matrix());

  double tr_rho_log_rho = 0.0;
  for (double lam : rho_eig.eigenvalues)
    if (lam > 1e-14) tr_rho_log_rho += lam * detail::log_of(lam, base);

  double tr_rho_log_chi = 0.0;
  const std::size_t d = rho.dim();
  for (std::size_t j = 0; j < d; ++j) {
    // weight of rho along the j-th eigenvector of chi
    cplx q = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      cplx row = 0.0;
      for (std::size_t c = 0; c < d; ++c) row += rho.matrix()(r, c) * chi_eig.eigenvectors(c, j);
      q += std::conj(chi_eig.eigenvectors(r, j)) * row;
    }
    const double w = std::real(q);
    const double mu = chi_eig.eigenvalues[j];
    if (mu > 1e-14) {
      tr_rho_log_chi += w * detail::log_of(mu, base);
    } else if (w > 1e-10) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return std::max(tr_rho_log_rho - tr_rho_log_chi, 0.0);
}

/// S_vn(rho_A) + S_vn(rho_B) - S_vn(rho_AB) for a two-part state.
inline double quantum_mutual_information(const DensityMatrix& rho, LogBase base = LogBase::two) {
  if (rho.partition().subsystem_count() != 2)
    throw std::invalid_argument("quantum_mutual_information: state is not bipartite");
  std::size_t keep_a[1] = {0}, keep_b[1] = {1};
  const double value = von_neumann_entropy(rho.reduced(keep_a), base) +
                       von_neumann_entropy(rho.reduced(keep_b), base) -
                       von_neumann_entropy(rho, base);
  if (value < -1e-9) throw internal_error("quantum_mutual_information: negative beyond tolerance");
  return std::max(value, 0.0);
}

}  // namespace qce
