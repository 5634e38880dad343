#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "qce/coarse_graining.hpp"
#include "qce/entropy.hpp"
#include "qce/optimize.hpp"
#include "qce/rng.hpp"
#include "qce/states.hpp"

namespace qce::verify {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf);
}

inline OptimizerConfig with_seed(OptimizerConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return cfg;
}

/// Tracks the worst margin over an ensemble; margin >= 0 means the check held.
struct WorstCase {
  double margin = std::numeric_limits<double>::infinity();
  std::string where;

  void feed(double m, const std::string& w) {
    if (m < margin) {
      margin = m;
      where = w;
    }
  }

  Check to_check(const std::string& name) const {
    Check c;
    c.name = name;
    c.pass = margin >= 0.0;
    c.detail = "worst margin " + fmt(margin) + (where.empty() ? "" : " at " + where);
    return c;
  }
};

/// Random coarse-graining with a random macrostate block structure (volumes
/// can exceed 1) in a Haar-random basis.
inline CoarseGraining random_cg(std::size_t dim, Rng& rng) {
  const ComplexMatrix u = haar_unitary(dim, rng);
  CoarseGraining cg;
  cg.dim = dim;
  std::size_t start = 0;
  while (start < dim) {
    const std::size_t block = 1 + rng.index(dim - start);
    std::vector<std::size_t> cols;
    for (std::size_t c = start; c < start + block; ++c) cols.push_back(c);
    cg.projectors.push_back(projector_from_columns(u, cols, 1e-8));
    start += block;
  }
  return cg;
}

inline LocalCoarseGraining random_local_cg(const PartitionSpec& partition, Rng& rng) {
  LocalCoarseGraining local;
  local.partition = partition;
  for (std::size_t d : partition.dims) local.factors.push_back(random_cg(d, rng));
  return local;
}

inline LocalBasisPoint random_basis_point(std::span<const std::size_t> dims, Rng& rng) {
  LocalBasisPoint p;
  for (std::size_t d : dims) p.unitaries.push_back(haar_unitary(d, rng));
  return p;
}

/// Relative entropy to the dephased state as a function of the basis point:
/// an independent evaluation path for the same search landscape.
class ReqObjective {
 public:
  explicit ReqObjective(const DensityMatrix& rho) : rho_(&rho) {
    for (std::size_t d : rho.dims()) block_sizes_.push_back(unitary_param_count(d));
  }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (std::size_t b : block_sizes_) n += b;
    return n;
  }

  double operator()(std::span<const double> flat) {
    LocalBasisPoint p;
    std::size_t offset = 0;
    for (std::size_t s = 0; s < block_sizes_.size(); ++s) {
      p.unitaries.push_back(unitary_from_params(flat.subspan(offset, block_sizes_[s]),
                                                rho_->dims()[s]));
      offset += block_sizes_[s];
    }
    return relative_entropy(*rho_, dephase(*rho_, p));
  }

 private:
  const DensityMatrix* rho_;
  std::vector<std::size_t> block_sizes_;
};

}  // namespace detail

/// Named reference values: the two-Bell-pair and GHZ four-qubit states in the
/// three standard regroupings, and the half(|00>+|1+>) mixture.
inline std::vector<Check> paper_examples_suite(const OptimizerConfig& base) {
  using detail::fmt;
  std::vector<Check> checks;
  std::uint64_t task = 0;
  auto cfg = [&]() { return detail::with_seed(base, base.seed + 1000 * (++task)); };

  const DensityMatrix two_bell = density_from_pure(two_bell_state());
  const DensityMatrix ghz4 = density_from_pure(ghz_state(4));
  const std::vector<std::vector<std::size_t>> paired = {{0, 2}, {1, 3}};  // (A1 B1)(A2 B2)
  const std::vector<std::vector<std::size_t>> ab_cut = {{0, 1}, {2, 3}};  // (A1 A2)(B1 B2)

  struct Case {
    std::string name;
    DensityMatrix rho;
    double expect;
    double tol;
  };
  std::vector<Case> cases;
  cases.push_back({"example_a_2bell_four_parts", two_bell, 2.0, 1e-3});
  cases.push_back({"example_a_2bell_paired_groups", regroup(two_bell, paired), 0.0, 1e-3});
  cases.push_back({"example_a_2bell_ab_groups", regroup(two_bell, ab_cut), 2.0, 1e-3});
  cases.push_back({"example_a_ghz4_four_parts", ghz4, 1.0, 1e-3});
  cases.push_back({"example_a_ghz4_paired_groups", regroup(ghz4, paired), 1.0, 1e-3});
  cases.push_back({"example_a_ghz4_ab_groups", regroup(ghz4, ab_cut), 1.0, 1e-3});
  for (const Case& c : cases) {
    const double got = qc_entropy(c.rho, cfg()).value;
    Check chk;
    chk.name = c.name;
    chk.pass = std::abs(got - c.expect) <= c.tol;
    chk.detail = "sqc " + fmt(got) + " expected " + fmt(c.expect) + " +- " + fmt(c.tol);
    checks.push_back(chk);
  }

  const DensityMatrix exb = example_b_state();
  const double sqc_b = qc_entropy(exb, cfg()).value;
  {
    Check chk;
    chk.name = "example_b_sqc";
    chk.pass = std::abs(sqc_b - 0.50) <= 0.01;
    chk.detail = "sqc " + fmt(sqc_b) + " expected 0.50 +- 0.01";
    checks.push_back(chk);
  }
  {
    const double oracle = brute_force_qc(exb, 4000, base.seed + 77);
    Check chk;
    chk.name = "example_b_oracle_agreement";
    chk.pass = std::abs(sqc_b - oracle) <= 0.01;
    chk.detail = "optimizer " + fmt(sqc_b) + " vs grid+sample oracle " + fmt(oracle);
    checks.push_back(chk);
  }
  {
    const double upper = qc_upper_bound(exb);
    const double lam = 0.5 * (1.0 + 1.0 / std::sqrt(2.0));
    const double derived = -(lam * std::log2(lam) + (1.0 - lam) * std::log2(1.0 - lam));
    Check chk;
    chk.name = "example_b_upper_bound";
    chk.pass = std::abs(upper - 0.60088) <= 1e-4 && std::abs(upper - derived) <= 1e-9;
    chk.detail = "upper " + fmt(upper) + " expected 0.60088 +- 1e-4";
    checks.push_back(chk);
  }
  {
    const double iqm = quantum_mutual_information(exb);
    const double icl = classical_mutual_information(exb, cfg());
    const double slack = sqc_b - (iqm - icl);
    Check chk;
    chk.name = "example_b_mutual_info_gap_strict";
    chk.pass = slack > 0.01;
    chk.detail = "sqc - (iqm - icl) = " + fmt(slack) + " must exceed 0.01";
    checks.push_back(chk);
  }
  return checks;
}

struct PropertySuiteConfig {
  std::size_t states = 50;          // 2- and 3-qubit mix, ranks cycling 1..4
  std::size_t cgs_per_state = 100;  // random coarse-grainings for the minimality check
  std::size_t points_per_state = 10;
  std::size_t twirls_per_state = 10;
  std::size_t product_states = 20;  // 4-qubit product states for additivity
  std::size_t special_case_states = 5;
  std::size_t req_minimizations = 3;
  std::uint64_t seed = 1;
  OptimizerConfig opt;
  std::size_t oracle_samples = 20000;
  bool with_oracle = true;
};

/// Randomized invariants: minimality of the eigenbasis measurement, bounds,
/// partition monotonicity, additivity, local-unitary invariance, the product
/// formula, the reduced-state lemma, and the dephasing identity.
inline std::vector<Check> properties_suite(const PropertySuiteConfig& pc) {
  using detail::fmt;
  using detail::WorstCase;
  const OptimizerConfig& base = pc.opt;

  struct StateCase {
    DensityMatrix rho;
    QcEntropyResult qc;
    std::size_t index;
  };
  std::vector<StateCase> ensemble;
  ensemble.reserve(pc.states);
  for (std::size_t i = 0; i < pc.states; ++i) {
    const bool three = (i % 2) == 1;
    const std::size_t dim = three ? 8 : 4;
    const std::size_t rank = 1 + (i / 2) % 4;
    DensityMatrix rho = random_density(dim, rank, pc.seed * 7919 + i)
                            .repartitioned(PartitionSpec(
                                three ? std::vector<std::size_t>{2, 2, 2}
                                      : std::vector<std::size_t>{2, 2}));
    QcEntropyResult qc = qc_entropy(rho, detail::with_seed(base, pc.seed + 13 * i));
    ensemble.push_back({std::move(rho), std::move(qc), i});
  }

  std::vector<Check> checks;

  {  // value range: 0 <= sqc <= log2(dim) - svn
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      const double room = std::log2(static_cast<double>(sc.rho.dim())) - sc.qc.von_neumann;
      w.feed(sc.qc.value + 1e-12, "state " + std::to_string(sc.index));
      w.feed(room + 1e-6 - sc.qc.value, "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("property_iv_range"));
  }

  {  // no measurement beats the eigenbasis measurement
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0xc6000 + sc.index);
      const double svn = sc.qc.von_neumann;
      for (std::size_t k = 0; k < pc.cgs_per_state; ++k) {
        const CoarseGraining cg = detail::random_cg(sc.rho.dim(), rng);
        const double s = observational_entropy(sc.rho, cg);
        w.feed(s - svn + 1e-9, "state " + std::to_string(sc.index) + " cg " + std::to_string(k));
      }
      const double eigen_entropy = observational_entropy(sc.rho, eigenbasis_cg(sc.rho));
      w.feed(1e-9 - std::abs(eigen_entropy - svn), "eigenbasis of state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("eigenbasis_minimality"));
  }

  {  // marginal-entropy sandwich
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      const std::size_t n = sc.rho.partition().subsystem_count();
      double lower = 0.0;
      for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> keep;
        for (std::size_t s = 0; s < n; ++s)
          if (mask & (std::size_t{1} << s)) keep.push_back(s);
        lower = std::max(lower, qc_lower_bound(sc.rho, keep));
      }
      const double upper = qc_upper_bound(sc.rho);
      w.feed(sc.qc.value - lower + 2e-3, "lower, state " + std::to_string(sc.index));
      w.feed(upper - sc.qc.value + 2e-3, "upper, state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("property_iv_sandwich"));
  }

  {  // any local measurement carries at least the searched minimum
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0x90011 + sc.index);
      for (std::size_t k = 0; k < pc.points_per_state; ++k) {
        const LocalBasisPoint p = detail::random_basis_point(sc.rho.dims(), rng);
        const double s = local_objective(sc.rho, p);
        w.feed(s - sc.qc.optimization.value + 1e-6,
               "state " + std::to_string(sc.index) + " point " + std::to_string(k));
      }
    }
    checks.push_back(w.to_check("property_iii_local_floor"));
  }

  {  // refining the partition cannot lower the correlation entropy
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      if (sc.rho.partition().subsystem_count() != 3) continue;
      const DensityMatrix merged = regroup(sc.rho, {{0}, {1, 2}});
      const double coarse =
          qc_entropy(merged, detail::with_seed(base, pc.seed + 9100 + sc.index)).value;
      w.feed(sc.qc.value - coarse + 2e-3, "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("property_v_partition_monotonicity"));
  }

  {  // additivity on product states
    WorstCase w;
    for (std::size_t k = 0; k < pc.product_states; ++k) {
      const DensityMatrix a = random_density(4, 1 + k % 4, pc.seed * 131 + 2 * k)
                                  .repartitioned(PartitionSpec({2, 2}));
      const DensityMatrix b = random_density(4, 1 + (k + 2) % 4, pc.seed * 131 + 2 * k + 1)
                                  .repartitioned(PartitionSpec({2, 2}));
      const DensityMatrix prod(tensor_product(a.matrix(), b.matrix()),
                               PartitionSpec({2, 2, 2, 2}));
      const double qa = qc_entropy(a, detail::with_seed(base, pc.seed + 3000 + 3 * k)).value;
      const double qb = qc_entropy(b, detail::with_seed(base, pc.seed + 3001 + 3 * k)).value;
      const double qp = qc_entropy(prod, detail::with_seed(base, pc.seed + 3002 + 3 * k)).value;
      w.feed(3e-3 - std::abs(qp - qa - qb), "product state " + std::to_string(k));

      const DensityMatrix merged = regroup(prod, {{0, 1}, {2}, {3}});
      const double qm = qc_entropy(merged, detail::with_seed(base, pc.seed + 3003 + 3 * k)).value;
      w.feed(2e-3 - std::abs(qm - qb), "merged-first product state " + std::to_string(k));
    }
    checks.push_back(w.to_check("property_vi_additivity"));
  }

  {  // invariance under local unitaries
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0x717000 + sc.index);
      for (std::size_t k = 0; k < pc.twirls_per_state; ++k) {
        const LocalBasisPoint twirl = detail::random_basis_point(sc.rho.dims(), rng);
        const DensityMatrix twirled(
            rotate_from_local_basis(sc.rho.matrix(), sc.rho.dims(), twirl.unitaries),
            sc.rho.partition());
        const double qt =
            qc_entropy(twirled, detail::with_seed(base, pc.seed + 5000 + 101 * sc.index + k)).value;
        w.feed(2e-3 - std::abs(qt - sc.qc.value),
               "state " + std::to_string(sc.index) + " twirl " + std::to_string(k));
      }
    }
    checks.push_back(w.to_check("property_vii_local_unitary_invariance"));
  }

  {  // exact landscape identity: twirls are absorbed into the basis point
    WorstCase w;
    for (std::size_t k = 0; k < std::min<std::size_t>(ensemble.size(), 6); ++k) {
      const StateCase& sc = ensemble[k];
      Rng rng = Rng::stream(pc.seed, 0xab5000 + k);
      const LocalBasisPoint twirl = detail::random_basis_point(sc.rho.dims(), rng);
      const LocalBasisPoint point = detail::random_basis_point(sc.rho.dims(), rng);
      const DensityMatrix twirled(
          rotate_from_local_basis(sc.rho.matrix(), sc.rho.dims(), twirl.unitaries),
          sc.rho.partition());
      LocalBasisPoint absorbed;
      for (std::size_t s = 0; s < point.unitaries.size(); ++s)
        absorbed.unitaries.push_back(twirl.unitaries[s].adjoint() * point.unitaries[s]);
      const double lhs = local_objective(twirled, point);
      const double rhs = local_objective(sc.rho, absorbed);
      w.feed(1e-10 - std::abs(lhs - rhs), "state " + std::to_string(k));
    }
    checks.push_back(w.to_check("property_vii_landscape_absorption"));
  }

  {  // joint entropy = sum of marginal entropies minus mutual information
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0xe17000 + sc.index);
      const LocalCoarseGraining local = detail::random_local_cg(sc.rho.partition(), rng);
      w.feed(1e-9 - product_formula_check(sc.rho, local), "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("product_formula_residual"));
  }

  {  // dropping a measured subsystem cannot raise the entropy
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0x1e44a0 + sc.index);
      const LocalCoarseGraining local = detail::random_local_cg(sc.rho.partition(), rng);
      const double joint = observational_entropy(sc.rho, product_cg(local));
      std::vector<std::size_t> keep;
      for (std::size_t s = 1; s < sc.rho.partition().subsystem_count(); ++s) keep.push_back(s);
      const DensityMatrix rest = sc.rho.reduced(keep);
      LocalCoarseGraining rest_local;
      rest_local.partition = rest.partition();
      for (std::size_t s = 1; s < local.factors.size(); ++s)
        rest_local.factors.push_back(local.factors[s]);
      const double reduced = observational_entropy(rest, product_cg(rest_local));
      w.feed(joint - reduced + 1e-9, "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("partial_trace_lemma"));
  }

  {  // relative entropy to the dephased state == entropy gap of that basis
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      Rng rng = Rng::stream(pc.seed, 0xdef0a0 + sc.index);
      const LocalBasisPoint p = detail::random_basis_point(sc.rho.dims(), rng);
      const double lhs = relative_entropy(sc.rho, dephase(sc.rho, p));
      const double rhs =
          observational_entropy(sc.rho, product_cg(from_basis_point(p))) - sc.qc.von_neumann;
      w.feed(1e-9 - std::abs(lhs - rhs), "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("dephasing_identity"));
  }

  {  // the correlation entropy dominates the mutual-information difference
    WorstCase w;
    std::size_t done = 0;
    for (const StateCase& sc : ensemble) {
      if (sc.rho.partition().subsystem_count() != 2 || done >= 8) continue;
      const double gap =
          mutual_info_gap(sc.rho, detail::with_seed(base, pc.seed + 7700 + sc.index));
      w.feed(sc.qc.value - gap + 2e-3, "state " + std::to_string(sc.index));
      ++done;
    }
    checks.push_back(w.to_check("mutual_info_gap_bound"));
  }

  {  // minimized relative entropy to dephased states equals the entropy gap
    WorstCase w;
    std::size_t done = 0;
    for (const StateCase& sc : ensemble) {
      if (sc.rho.partition().subsystem_count() != 2 || done >= pc.req_minimizations) continue;
      detail::ReqObjective req(sc.rho);
      OptimizerConfig cfg = detail::with_seed(base, pc.seed + 13 * sc.index);  // same landscape seed
      const qce::detail::SearchOutcome sr =
          qce::detail::multistart_coordinate_descent(req, req.param_count(), cfg);
      const double via_req = std::max(sr.value, 0.0);
      const double via_entropy = sc.qc.optimization.value - sc.qc.von_neumann;
      w.feed(1e-6 - std::abs(via_req - via_entropy), "state " + std::to_string(sc.index));
      ++done;
    }
    checks.push_back(w.to_check("req_equivalence"));
  }

  {  // three-qubit aligned pure states: gap equals the marginal entropy
    WorstCase w;
    for (std::size_t k = 0; k < pc.special_case_states; ++k) {
      Rng rng = Rng::stream(pc.seed, 0x519000 + k);
      const double a0 = 0.1 + 0.8 * rng.uniform();
      const std::vector<double> weights = {a0, 1.0 - a0};
      LocalBasisPoint bases = detail::random_basis_point(std::vector<std::size_t>{2, 2, 2}, rng);
      std::vector<cplx> amps(8, 0.0);
      for (std::size_t t = 0; t < 2; ++t) {
        const double alpha = std::sqrt(weights[t]);
        for (std::size_t idx = 0; idx < 8; ++idx) {
          const std::size_t i0 = (idx >> 2) & 1, i1 = (idx >> 1) & 1, i2 = idx & 1;
          amps[idx] += alpha * bases.unitaries[0](i0, t) * bases.unitaries[1](i1, t) *
                       bases.unitaries[2](i2, t);
        }
      }
      const PureState psi(std::move(amps), PartitionSpec({2, 2, 2}));
      const double s0 = shannon_entropy(weights);
      const double qc =
          qc_entropy(density_from_pure(psi), detail::with_seed(base, pc.seed + 6200 + k)).value;
      w.feed(2e-3 - std::abs(qc - s0), "aligned state " + std::to_string(k));
      std::size_t keep[1] = {0};
      const double marginal = von_neumann_entropy(density_from_pure(psi).reduced(keep));
      w.feed(1e-9 - std::abs(marginal - s0), "marginal of aligned state " + std::to_string(k));
    }
    checks.push_back(w.to_check("special_case_aligned_pure"));
  }

  if (pc.with_oracle) {  // searched values agree with the sampling+grid oracle
    WorstCase w;
    for (const StateCase& sc : ensemble) {
      if (sc.rho.partition().subsystem_count() != 2) continue;
      const double oracle = brute_force_qc(sc.rho, pc.oracle_samples, pc.seed + 40 + sc.index);
      w.feed(0.01 - std::abs(sc.qc.value - oracle), "state " + std::to_string(sc.index));
    }
    checks.push_back(w.to_check("oracle_agreement"));
  }

  return checks;
}

struct FastPathConfig {
  std::size_t pure_states = 20;
  std::size_t sigma_matrices = 10;
  std::uint64_t seed = 2;
  OptimizerConfig opt;
};

/// The closed forms (Schmidt entropy and the maximally correlated formula)
/// must agree with the numerical search.
inline std::vector<Check> fast_path_suite(const FastPathConfig& fc) {
  using detail::fmt;
  using detail::WorstCase;
  std::vector<Check> checks;

  {
    WorstCase w;
    const std::vector<std::vector<std::size_t>> shapes = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
    for (std::size_t k = 0; k < fc.pure_states; ++k) {
      const PartitionSpec part(shapes[k % shapes.size()]);
      const PureState psi = random_pure(part, fc.seed * 401 + k);
      const double analytic = qc_bipartite_pure(psi, 1);
      const double searched =
          qc_entropy(density_from_pure(psi), detail::with_seed(fc.opt, fc.seed + 500 + k)).value;
      w.feed(2e-3 - std::abs(analytic - searched), "pure state " + std::to_string(k));
    }
    checks.push_back(w.to_check("fast_path_bipartite_pure"));
  }

  {
    WorstCase w;
    for (std::size_t k = 0; k < fc.sigma_matrices; ++k) {
      Rng rng = Rng::stream(fc.seed, 0x51a000 + k);
      const std::size_t m = 2 + k % 2;
      ComplexMatrix sigma(m, m);
      {
        const ComplexMatrix g = ginibre_matrix(m, m, rng);
        double tr = 0.0;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            cplx sum = 0.0;
            for (std::size_t c = 0; c < m; ++c) sum += g(i, c) * std::conj(g(j, c));
            sigma(i, j) = sum;
            if (i == j) tr += std::real(sum);
          }
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) sigma(i, j) /= tr;
        for (std::size_t i = 0; i < m; ++i) sigma(i, i) = cplx(std::real(sigma(i, i)), 0.0);
      }
      std::vector<ComplexMatrix> bases;
      const std::size_t parts = (m == 2 && k % 4 == 2) ? 3 : 2;  // tripartite needs qubit-sized sigma
      for (std::size_t s = 0; s < parts; ++s) bases.push_back(haar_unitary(m, rng));
      const DensityMatrix rho = maximally_correlated_state(sigma, bases);
      const double analytic = qc_maximally_correlated(sigma);
      const double searched =
          qc_entropy(rho, detail::with_seed(fc.opt, fc.seed + 700 + k)).value;
      w.feed(2e-3 - std::abs(analytic - searched), "sigma " + std::to_string(k));
    }
    checks.push_back(w.to_check("fast_path_maximally_correlated"));
  }

  return checks;
}

struct OracleSuiteConfig {
  std::size_t states = 8;
  std::size_t samples = 10000;
  std::uint64_t seed = 3;
  OptimizerConfig opt;
};

/// Optimizer vs the independent sampling+grid oracle on two-qubit states.
inline std::vector<Check> oracle_suite(const OracleSuiteConfig& oc) {
  using detail::WorstCase;
  std::vector<Check> checks;
  WorstCase w;
  std::vector<std::pair<std::string, DensityMatrix>> cases;
  cases.emplace_back("bell", density_from_pure(
                                 PureState({1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)},
                                           PartitionSpec({2, 2}))));
  cases.emplace_back("example_b", example_b_state());
  {
    const std::vector<double> probs = {0.5, 0.0, 0.0, 0.5};
    cases.emplace_back("classical", classical_state(probs, std::vector<std::size_t>{2, 2}));
  }
  for (std::size_t k = 0; k < oc.states; ++k)
    cases.emplace_back("random " + std::to_string(k),
                       random_density(4, 1 + k % 4, oc.seed * 53 + k)
                           .repartitioned(PartitionSpec({2, 2})));
  std::size_t task = 0;
  for (const auto& [name, rho] : cases) {
    const double searched = qc_entropy(rho, detail::with_seed(oc.opt, oc.seed + 11 * (++task))).value;
    const double oracle = brute_force_qc(rho, oc.samples, oc.seed + 1700 + task);
    w.feed(0.01 - std::abs(searched - oracle), name);
  }
  checks.push_back(w.to_check("oracle_agreement"));
  return checks;
}

}  // namespace qce::verify
