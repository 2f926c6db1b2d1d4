#include "blocktrace/generators.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace blocktrace {

namespace {

ComplexMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.next_complex_gaussian();
  }
  return g;
}

ComplexMatrix gram(const ComplexMatrix& factor) {
  return matmul(factor, adjoint(factor));
}

// Rescale so tr(a) = 1; a zero trace (possible only for the zero matrix)
// is left untouched.
void normalize_trace(ComplexMatrix& a) {
  const double t = trace(a).real();
  if (t > 0.0) a *= Complex{1.0 / t, 0.0};
}

double spectral_radius_hermitian(const ComplexMatrix& h) {
  const Spectrum spec = hermitian_eig(h);
  if (spec.eigenvalues.empty()) return 0.0;
  return std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
}

}  // namespace

void GeneratorConfig::validate() const {
  if (m < 1 || n < 1) throw DomainError("GeneratorConfig: m and n must be >= 1");
  if (rank && (*rank < 0 || *rank > m * n)) {
    throw DomainError("GeneratorConfig: rank must lie in [0, m*n]");
  }
  if (alpha && !(*alpha >= 0.0 && *alpha < 1.5707963267948966)) {
    throw DomainError("GeneratorConfig: alpha must lie in [0, pi/2)");
  }
  if (terms && *terms < 1) throw DomainError("GeneratorConfig: terms must be >= 1");
}

BlockMatrix materialize(const PsdLatent& latent) {
  const int mn = latent.m * latent.n;
  if (latent.factor.cols() == 0) {
    return BlockMatrix(latent.m, latent.n, ComplexMatrix(mn, mn));
  }
  ComplexMatrix a = gram(latent.factor);
  normalize_trace(a);
  return BlockMatrix(latent.m, latent.n, std::move(a));
}

BlockMatrix materialize(const SeparableLatent& latent) {
  const int mn = latent.m * latent.n;
  ComplexMatrix a(mn, mn);
  for (std::size_t i = 0; i < latent.left.size(); ++i) {
    a += kron(gram(latent.left[i]), gram(latent.right[i]));
  }
  normalize_trace(a);
  return BlockMatrix(latent.m, latent.n, std::move(a));
}

ComplexMatrix materialize(const SectorLatent& latent) {
  const int d = latent.dim;
  ComplexMatrix b = gram(latent.b_factor);
  for (int i = 0; i < d; ++i) b(i, i) += 1e-3;

  const double tan_alpha = std::tan(latent.alpha);
  ComplexMatrix k(d, d);
  if (tan_alpha > 0.0) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        k(i, j) = 0.5 * (latent.k_raw(i, j) + std::conj(latent.k_raw(j, i)));
      }
    }
    const double radius = spectral_radius_hermitian(k);
    if (radius > 1e-300) {
      k *= Complex{latent.mix * tan_alpha / radius, 0.0};
    } else {
      k = ComplexMatrix(d, d);
    }
  }

  const ComplexMatrix root = psd_sqrt(b);
  const ComplexMatrix imag_part = matmul(matmul(root, k), root);
  return b + Complex{0.0, 1.0} * imag_part;
}

Quadruple materialize(const QuadrupleLatent& latent) {
  Quadruple q;
  q.w = gram(latent.gw);
  q.z = gram(latent.gz) * Complex{latent.z_shrink, 0.0};
  const ComplexMatrix s = gram(latent.gs);
  const ComplexMatrix u = gram(latent.gu);
  q.x = q.w + s;
  // psd_clip(z - s) >= z - s, so x + y >= w + z by construction.
  q.y = psd_clip(q.z - s) + u;
  return q;
}

bool quadruple_preconditions_ok(const Quadruple& q, double tol_scale) {
  if (!is_psd(q.x).is_psd || !is_psd(q.y).is_psd || !is_psd(q.w).is_psd ||
      !is_psd(q.z).is_psd) {
    return false;
  }
  return loewner_ge(q.x, q.w, tol_scale).is_psd &&
         loewner_ge(q.x, q.z, tol_scale).is_psd &&
         loewner_ge(q.x + q.y, q.w + q.z, tol_scale).is_psd;
}

ComplexMatrix psd_clip(const ComplexMatrix& a) {
  const Spectrum spec = hermitian_eig(a);
  const int n = a.rows();
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int k = 0; k < n; ++k) {
        const double lambda = std::max(spec.eigenvalues[k], 0.0);
        if (lambda == 0.0) continue;
        acc += spec.eigenvectors(i, k) * lambda * std::conj(spec.eigenvectors(j, k));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix rand_hermitian(int d, std::uint64_t seed) {
  if (d < 1) throw DomainError("rand_hermitian: d must be >= 1");
  Rng rng(mix_stream(seed, fnv1a("hermitian")));
  const ComplexMatrix g = gaussian_matrix(rng, d, d);
  ComplexMatrix h(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  }
  return h;
}

ComplexMatrix rand_gram(int d, std::uint64_t seed) {
  if (d < 1) throw DomainError("rand_gram: d must be >= 1");
  Rng rng(mix_stream(seed, fnv1a("gram")));
  return gram(gaussian_matrix(rng, d, d));
}

PsdLatent draw_psd_latent(const GeneratorConfig& cfg) {
  cfg.validate();
  const int mn = cfg.m * cfg.n;
  const int rank = cfg.rank.value_or(mn);
  Rng rng(mix_stream(cfg.seed, fnv1a("psd_block")));
  PsdLatent latent;
  latent.m = cfg.m;
  latent.n = cfg.n;
  latent.factor = gaussian_matrix(rng, mn, rank);
  return latent;
}

BlockMatrix rand_psd_block(const GeneratorConfig& cfg) {
  return materialize(draw_psd_latent(cfg));
}

SeparableLatent draw_separable_latent(const GeneratorConfig& cfg) {
  cfg.validate();
  const int terms = cfg.terms.value_or(cfg.m * cfg.n);
  Rng rng(mix_stream(cfg.seed, fnv1a("ppt_separable")));
  SeparableLatent latent;
  latent.m = cfg.m;
  latent.n = cfg.n;
  latent.left.reserve(terms);
  latent.right.reserve(terms);
  for (int i = 0; i < terms; ++i) {
    latent.left.push_back(gaussian_matrix(rng, cfg.m, cfg.m));
    latent.right.push_back(gaussian_matrix(rng, cfg.n, cfg.n));
  }
  return latent;
}

BlockMatrix rand_ppt_separable(const GeneratorConfig& cfg) {
  return materialize(draw_separable_latent(cfg));
}

SectorLatent draw_sector_latent(int d, const SectorParams& sector, std::uint64_t seed) {
  if (d < 1) throw DomainError("rand_sector: d must be >= 1");
  Rng rng(mix_stream(seed, fnv1a("sector")));
  SectorLatent latent;
  latent.dim = d;
  latent.alpha = sector.alpha;
  latent.b_factor = gaussian_matrix(rng, d, d);
  latent.k_raw = gaussian_matrix(rng, d, d);
  latent.mix = rng.next_unit();
  return latent;
}

ComplexMatrix rand_sector(int d, const SectorParams& sector, std::uint64_t seed) {
  return materialize(draw_sector_latent(d, sector, seed));
}

QuadrupleLatent draw_quadruple_latent(int ell, std::uint64_t seed) {
  if (ell < 1) throw DomainError("rand_lemma_quadruple: ell must be >= 1");
  Rng rng(mix_stream(seed, fnv1a("quadruple")));
  QuadrupleLatent latent;
  latent.ell = ell;
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    latent.gw = gaussian_matrix(rng, ell, ell);
    latent.gz = gaussian_matrix(rng, ell, ell);
    latent.gs = gaussian_matrix(rng, ell, ell);
    latent.gu = gaussian_matrix(rng, ell, ell);
    latent.z_shrink = 1.0;
    const ComplexMatrix x = gram(latent.gw) + gram(latent.gs);
    if (loewner_ge(x, gram(latent.gz)).is_psd) return latent;
  }
  // Keep the last draw and shrink Z until X dominates it.
  const ComplexMatrix x = gram(latent.gw) + gram(latent.gs);
  for (int k = 0; k < 64; ++k) {
    latent.z_shrink *= 0.5;
    if (loewner_ge(x, gram(latent.gz) * Complex{latent.z_shrink, 0.0}).is_psd) {
      return latent;
    }
  }
  throw GenerationError("rand_lemma_quadruple: could not establish X >= Z");
}

Quadruple rand_lemma_quadruple(int ell, std::uint64_t seed) {
  const QuadrupleLatent latent = draw_quadruple_latent(ell, seed);
  Quadruple q = materialize(latent);
  if (!quadruple_preconditions_ok(q)) {
    throw GenerationError("rand_lemma_quadruple: preconditions failed re-verification");
  }
  return q;
}

}  // namespace blocktrace
