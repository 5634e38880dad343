#pragma once

#include <cstdint>
#include <random>

#include "qce/complex_matrix.hpp"

namespace qce {

/// Deterministic random source. All sampling goes through explicit formulas
/// on top of mt19937_64 so that a seed pins down the exact byte-level output
/// everywhere (std::normal_distribution and friends are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent stream derived from (seed, stream index).
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed) ^ mix(0x9e3779b97f4a7c15ull + index));
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t integer() { return engine_(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  /// Standard normal via Box-Muller (cosine branch only).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  cplx complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im);
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

/// Matrix of independent standard complex Gaussians.
inline ComplexMatrix ginibre_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R diagonal made
/// real positive (modified Gram-Schmidt).
inline ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  ComplexMatrix q = ginibre_matrix(dim, dim, rng);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += std::conj(q(i, prev)) * q(i, c);
      for (std::size_t i = 0; i < dim; ++i) q(i, c) -= dot * q(i, prev);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(q(i, c));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) {
      // Degenerate draw (measure zero); replace the column and redo it.
      for (std::size_t i = 0; i < dim; ++i) q(i, c) = rng.complex_gaussian();
      --c;
      continue;
    }
    for (std::size_t i = 0; i < dim; ++i) q(i, c) /= nrm;
  }
  return q;
}

}  // namespace qce
