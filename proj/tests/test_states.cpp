#include <doctest.h>

#include "qce/states.hpp"
#include "test_helpers.hpp"

using namespace qce;
using testutil::mat;

namespace {

PureState make_pure(std::vector<cplx> amps, std::vector<std::size_t> dims) {
  return PureState(std::move(amps), PartitionSpec(std::move(dims)));
}

std::vector<cplx> reconstruct(const SchmidtDecomposition& sd, std::size_t dl, std::size_t dr) {
  std::vector<cplx> amps(dl * dr, 0.0);
  for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
    for (std::size_t l = 0; l < dl; ++l)
      for (std::size_t r = 0; r < dr; ++r)
        amps[l * dr + r] += sd.coefficients[k] * sd.left_basis(l, k) * sd.right_basis(r, k);
  return amps;
}

}  // namespace

TEST_CASE("density from pure state") {
  CHECK(density_from_pure(make_pure({1, 0}, {2})).matrix().approx_equal(mat(2, 2, {1, 0, 0, 0}), 0.0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(density_from_pure(make_pure({r, r}, {2}))
            .matrix()
            .approx_equal(mat(2, 2, {0.5, 0.5, 0.5, 0.5}), 1e-15));
  const DensityMatrix bell = density_from_pure(make_pure({r, 0, 0, r}, {2, 2}));
  ComplexMatrix expect(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 0.5;
  CHECK(bell.matrix().approx_equal(expect, 1e-15));
}

TEST_CASE("ghz states") {
  const double r = 1.0 / std::sqrt(2.0);
  const PureState g2 = ghz_state(2);
  CHECK_EQ(g2.amplitudes[0], cplx(r, 0.0));
  CHECK_EQ(g2.amplitudes[3], cplx(r, 0.0));
  CHECK_EQ(g2.amplitudes[1], cplx(0.0, 0.0));

  const PureState g4 = ghz_state(4);
  CHECK_EQ(g4.dim(), 16);
  CHECK_EQ(g4.amplitudes[0], cplx(r, 0.0));
  CHECK_EQ(g4.amplitudes[15], cplx(r, 0.0));

  const PureState g3 = ghz_state(3);
  CHECK_EQ(g3.amplitudes[0], cplx(r, 0.0));
  CHECK_EQ(g3.amplitudes[7], cplx(r, 0.0));
  for (std::size_t i = 1; i < 7; ++i) CHECK_EQ(g3.amplitudes[i], cplx(0.0, 0.0));

  CHECK_THROWS_AS(ghz_state(1), std::invalid_argument);
}

TEST_CASE("two bell pairs in A1 A2 B1 B2 order") {
  const PureState tb = two_bell_state();
  CHECK_EQ(tb.amplitudes[0b0000], cplx(0.5, 0.0));
  CHECK_EQ(tb.amplitudes[0b0101], cplx(0.5, 0.0));  // A2 = B2 = 1
  CHECK_EQ(tb.amplitudes[0b1010], cplx(0.5, 0.0));
  CHECK_EQ(tb.amplitudes[0b1111], cplx(0.5, 0.0));
  CHECK_EQ(tb.amplitudes[0b0001], cplx(0.0, 0.0));
  CHECK_EQ(tb.partition.dims, std::vector<std::size_t>{2, 2, 2, 2});
}

TEST_CASE("maximally correlated states") {
  const ComplexMatrix sigma_bell = mat(2, 2, {0.5, 0.5, 0.5, 0.5});
  std::vector<ComplexMatrix> qubit_bases = {ComplexMatrix::identity(2), ComplexMatrix::identity(2)};

  const DensityMatrix bell = maximally_correlated_state(sigma_bell, qubit_bases);
  ComplexMatrix expect(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 0.5;
  CHECK(bell.matrix().approx_equal(expect, 1e-12));

  const DensityMatrix classical =
      maximally_correlated_state(mat(2, 2, {0.5, 0, 0, 0.5}), qubit_bases);
  ComplexMatrix mix(4, 4);
  mix(0, 0) = mix(3, 3) = 0.5;
  CHECK(classical.matrix().approx_equal(mix, 1e-12));

  std::vector<ComplexMatrix> three = {ComplexMatrix::identity(2), ComplexMatrix::identity(2),
                                      ComplexMatrix::identity(2)};
  const DensityMatrix ghz3 = maximally_correlated_state(sigma_bell, three);
  CHECK_EQ(ghz3.dim(), 8);
  CHECK_LE(std::abs(ghz3.matrix()(0, 7) - cplx(0.5, 0.0)), 1e-12);

  CHECK_THROWS_AS(maximally_correlated_state(mat(2, 2, {0.5, 0.5, -0.5, 0.5}), qubit_bases),
                  invalid_state_error);
  CHECK_THROWS_AS(maximally_correlated_state(mat(2, 2, {0.9, 0, 0, 0.5}), qubit_bases),
                  invalid_state_error);
  CHECK_THROWS_AS(maximally_correlated_state(mat(2, 2, {-0.2, 0, 0, 1.2}), qubit_bases),
                  invalid_state_error);
}

TEST_CASE("classical states") {
  const std::vector<std::size_t> dims = {2, 2};
  const std::vector<double> uniform = {0.25, 0.25, 0.25, 0.25};
  const DensityMatrix mixed = classical_state(uniform, dims);
  CHECK(mixed.matrix().approx_equal(ComplexMatrix::identity(4) * cplx(0.25, 0.0), 1e-14));

  const std::vector<double> corr = {0.5, 0.0, 0.0, 0.5};
  const DensityMatrix c = classical_state(corr, dims);
  CHECK_LE(std::abs(c.matrix()(0, 0) - cplx(0.5, 0.0)), 1e-14);
  CHECK_LE(std::abs(c.matrix()(3, 3) - cplx(0.5, 0.0)), 1e-14);
  CHECK_LE(std::abs(c.matrix()(0, 3)), 1e-14);

  CHECK_THROWS_AS(classical_state(std::vector<double>{0.5, 0.6, -0.1, 0.0}, dims),
                  invalid_state_error);
  CHECK_THROWS_AS(classical_state(std::vector<double>{0.5, 0.1, 0.1, 0.1}, dims),
                  invalid_state_error);
}

TEST_CASE("example b state") {
  const DensityMatrix rho = example_b_state();
  CHECK_LE(std::abs(rho.matrix().trace() - cplx(1.0, 0.0)), 1e-14);
  // the two mixed components are orthogonal: spectrum (1/2, 1/2, 0, 0)
  const EigenDecomposition eig = hermitian_eigendecomposition(rho.matrix());
  CHECK_LE(std::abs(eig.eigenvalues[0] - 0.5), 1e-12);
  CHECK_LE(std::abs(eig.eigenvalues[1] - 0.5), 1e-12);
  CHECK_LE(std::abs(eig.eigenvalues[2]), 1e-12);
  CHECK_LE(std::abs(eig.eigenvalues[3]), 1e-12);
  std::size_t keep_a[1] = {0};
  CHECK(rho.reduced(keep_a).matrix().approx_equal(ComplexMatrix::identity(2) * cplx(0.5, 0.0),
                                                  1e-12));
}

TEST_CASE("random densities") {
  const DensityMatrix pure = random_density(4, 1, 99);
  const ComplexMatrix sq = pure.matrix() * pure.matrix();
  CHECK_LE(std::abs(sq.trace() - cplx(1.0, 0.0)), 1e-10);  // purity

  const DensityMatrix a = random_density(6, 3, 123);
  const DensityMatrix b = random_density(6, 3, 123);
  CHECK(a.matrix().approx_equal(b.matrix(), 0.0));
  const DensityMatrix c = random_density(6, 3, 124);
  CHECK_GT(testutil::max_abs_diff(a.matrix(), c.matrix()), 1e-3);

  CHECK_THROWS_AS(random_density(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_density(4, 5, 1), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(mat(2, 2, {cplx(0.5, 0), cplx(0, 0.2), 0, cplx(0.5, 0)}),
                                PartitionSpec({2})),
                  invalid_state_error);
  CHECK_THROWS_AS(DensityMatrix(mat(2, 2, {0.7, 0, 0, 0.7}), PartitionSpec({2})),
                  invalid_state_error);
  CHECK_THROWS_AS(DensityMatrix(mat(2, 2, {1.2, 0, 0, -0.2}), PartitionSpec({2})),
                  invalid_state_error);
  // eigenvalue in [-1e-8, 0) is clipped and the trace renormalized
  const double eps = 4e-9;
  const DensityMatrix fixed =
      DensityMatrix(mat(2, 2, {1.0 + eps, 0, 0, -eps}), PartitionSpec({2}));
  const EigenDecomposition eig = hermitian_eigendecomposition(fixed.matrix());
  CHECK_GE(eig.eigenvalues[1], 0.0);
  CHECK_LE(std::abs(fixed.matrix().trace() - cplx(1.0, 0.0)), 1e-12);
}

TEST_CASE("schmidt decomposition examples") {
  const double r = 1.0 / std::sqrt(2.0);
  {
    const SchmidtDecomposition sd = schmidt_decompose(make_pure({r, 0, 0, r}, {2, 2}), 1);
    CHECK_LE(std::abs(sd.coefficients[0] - r), 1e-12);
    CHECK_LE(std::abs(sd.coefficients[1] - r), 1e-12);
  }
  {
    const SchmidtDecomposition sd = schmidt_decompose(make_pure({r, r, 0, 0}, {2, 2}), 1);
    CHECK_LE(std::abs(sd.coefficients[0] - 1.0), 1e-12);
    CHECK_LE(std::abs(sd.coefficients[1]), 1e-9);
  }
  {
    const SchmidtDecomposition sd =
        schmidt_decompose(make_pure({std::sqrt(0.9), 0, 0, std::sqrt(0.1)}, {2, 2}), 1);
    CHECK_LE(std::abs(sd.coefficients[0] - std::sqrt(0.9)), 1e-12);
    CHECK_LE(std::abs(sd.coefficients[1] - std::sqrt(0.1)), 1e-12);
  }
  CHECK_THROWS_AS(schmidt_decompose(make_pure({1, 0, 0, 0}, {2, 2}), 2), std::invalid_argument);
}

TEST_CASE("schmidt decomposition reconstructs and is locally invariant") {
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const PartitionSpec part({2, 3});
    const PureState psi = random_pure(part, seed);
    const SchmidtDecomposition sd = schmidt_decompose(psi, 1);
    const std::vector<cplx> back = reconstruct(sd, 2, 3);
    double err = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i)
      err = std::max(err, std::abs(back[i] - psi.amplitudes[i]));
    CHECK_LE(err, 1e-9);
    double sum = 0.0;
    for (double cval : sd.coefficients) sum += cval * cval;
    CHECK_LE(std::abs(sum - 1.0), 1e-10);

    // local unitaries leave the coefficient list unchanged
    Rng rng = Rng::stream(seed, 500);
    std::vector<ComplexMatrix> us = {haar_unitary(2, rng), haar_unitary(3, rng)};
    std::vector<cplx> rotated(psi.amplitudes.size(), 0.0);
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t l2 = 0; l2 < 2; ++l2)
          for (std::size_t m2 = 0; m2 < 3; ++m2)
            rotated[l * 3 + m] += us[0](l, l2) * us[1](m, m2) * psi.amplitudes[l2 * 3 + m2];
    const SchmidtDecomposition sd2 = schmidt_decompose(PureState(rotated, part), 1);
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
      CHECK_LE(std::abs(sd.coefficients[k] - sd2.coefficients[k]), 1e-9);
  }
}

TEST_CASE("subsystem permutation and regrouping") {
  const DensityMatrix tb = density_from_pure(two_bell_state());
  // pairing regroup puts each Bell pair inside one group: a product state
  const DensityMatrix paired = regroup(tb, {{0, 2}, {1, 3}});
  CHECK_EQ(paired.partition().dims, std::vector<std::size_t>{4, 4});
  std::size_t keep[1] = {0};
  const DensityMatrix first = paired.reduced(keep);
  ComplexMatrix bell(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  CHECK(first.matrix().approx_equal(bell, 1e-12));

  // permuting twice with the inverse permutation is the identity
  const std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<std::size_t> inv(4);
  for (std::size_t i = 0; i < 4; ++i) inv[perm[i]] = i;
  const DensityMatrix roundtrip = permute_subsystems(permute_subsystems(tb, perm), inv);
  CHECK(roundtrip.matrix().approx_equal(tb.matrix(), 0.0));
}
