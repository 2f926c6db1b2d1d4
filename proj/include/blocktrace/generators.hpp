#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blocktrace/blockops.hpp"
#include "blocktrace/cones.hpp"
#include "blocktrace/matkernel.hpp"
#include "blocktrace/rng.hpp"

namespace blocktrace {

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int m = 1;
  int n = 1;
  std::optional<int> rank;     // defaults to m*n
  std::optional<double> alpha; // sector half-angle
  std::optional<int> terms;    // separable summand count, defaults to m*n

  void validate() const;
};

// Latent representations. Each random family stores the raw factors it was
// built from, so an instance can be perturbed coordinate-wise while staying
// inside its hypothesis class by construction. materialize() is the pure,
// deterministic map latent -> instance.

struct PsdLatent {
  int m = 1;
  int n = 1;
  ComplexMatrix factor;  // (m*n) x rank
};
BlockMatrix materialize(const PsdLatent& latent);

struct SeparableLatent {
  int m = 1;
  int n = 1;
  std::vector<ComplexMatrix> left;   // m x m factors
  std::vector<ComplexMatrix> right;  // n x n factors
};
BlockMatrix materialize(const SeparableLatent& latent);

struct SectorLatent {
  int dim = 1;
  double alpha = 0.0;
  ComplexMatrix b_factor;  // dim x dim, real part is b_factor b_factor* + 1e-3 I
  ComplexMatrix k_raw;     // dim x dim, Hermitian part sets the angular spread
  double mix = 0.0;        // in [0, 1]; realized margin is atan(mix * tan alpha)
};
ComplexMatrix materialize(const SectorLatent& latent);

struct Quadruple {
  ComplexMatrix x, y, w, z;
};

struct QuadrupleLatent {
  int ell = 1;
  ComplexMatrix gw, gz, gs, gu;  // ell x ell Gram factors
  double z_shrink = 1.0;
};
Quadruple materialize(const QuadrupleLatent& latent);

// True when x >= w, x >= z and x + y >= w + z all hold within the Loewner
// tolerance, with all four matrices PSD.
bool quadruple_preconditions_ok(const Quadruple& q, double tol_scale = 1e-8);

// Zeroes the negative eigenvalues of a Hermitian matrix.
ComplexMatrix psd_clip(const ComplexMatrix& a);

// (G + G*)/2 with standard complex Gaussian G; Hermitian exactly by
// construction.
ComplexMatrix rand_hermitian(int d, std::uint64_t seed);

// Unnormalized Gram matrix H H* with H a d x d standard complex Gaussian.
ComplexMatrix rand_gram(int d, std::uint64_t seed);

// A = G G* with G of shape (mn, rank), rescaled to trace 1 (rank 0 yields
// the zero matrix).
BlockMatrix rand_psd_block(const GeneratorConfig& cfg);
PsdLatent draw_psd_latent(const GeneratorConfig& cfg);

// A = sum of P_i (x) Q_i with Gram-PSD factors, rescaled to trace 1. PPT by
// construction: the partial transpose is sum of P_i (x) Q_i^T, again PSD.
BlockMatrix rand_ppt_separable(const GeneratorConfig& cfg);
SeparableLatent draw_separable_latent(const GeneratorConfig& cfg);

// A = B + i B^{1/2} K B^{1/2} with B positive definite and the Hermitian K
// rescaled so lambda_max(|K|) = u * tan(alpha), u uniform in [0, 1]. The
// numerical range is then contained in the sector of half-angle alpha.
ComplexMatrix rand_sector(int d, const SectorParams& sector, std::uint64_t seed);
SectorLatent draw_sector_latent(int d, const SectorParams& sector, std::uint64_t seed);

// Quadruple (X, Y, W, Z), all PSD, satisfying X >= W, X >= Z and
// X + Y >= W + Z. Draws are rejected until X >= Z holds (1000 attempts,
// then Z is shrunk by halves); the preconditions are re-verified before
// returning.
Quadruple rand_lemma_quadruple(int ell, std::uint64_t seed);
QuadrupleLatent draw_quadruple_latent(int ell, std::uint64_t seed);

}  // namespace blocktrace
