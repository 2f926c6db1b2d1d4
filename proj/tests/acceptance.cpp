// Acceptance suite: every release criterion in one binary, one line of
// output per criterion. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "blocktrace/harness.hpp"
#include "oracles.hpp"

using namespace blocktrace;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
  int number;
  std::string description;
  std::function<void()> body;
};

struct Failure {
  std::string detail;
};

void require(bool condition, const std::string& detail) {
  if (!condition) throw Failure{detail};
}

double ipow(double base, int exp) {
  double acc = 1.0;
  for (int i = 0; i < exp; ++i) acc *= base;
  return acc;
}

double unnorm(const Verdict& v, const std::string& name, int mn) {
  return v.term(name) * ipow(v.term("scale"), mn);
}

void require_close(double got, double want, double rel_tol, const std::string& what) {
  const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
  if (err > rel_tol) {
    std::ostringstream msg;
    msg << what << ": got " << got << ", want " << want << " (rel err " << err << ")";
    throw Failure{msg.str()};
  }
}

// ---------------------------------------------------------------------------
// 1. Diagonal fixture: every checker reproduces the hand-computed table.
// ---------------------------------------------------------------------------
void criterion_fixture() {
  const auto started = std::chrono::steady_clock::now();
  const BlockMatrix fix = oracles::diag_fixture();

  const ComplexMatrix tr1 = partial_trace_1(fix);
  require_close(tr1(0, 0).real(), 4.0, 1e-12, "tr1(0,0)");
  require_close(tr1(1, 1).real(), 6.0, 1e-12, "tr1(1,1)");
  const ComplexMatrix tr2 = partial_trace_2(fix);
  require_close(tr2(0, 0).real(), 3.0, 1e-12, "tr2(0,0)");
  require_close(tr2(1, 1).real(), 7.0, 1e-12, "tr2(1,1)");

  require_close(lu_det(fix.data).real(), 24.0, 1e-10, "det A");
  require_close(lu_det(tr1).real(), 24.0, 1e-10, "det tr1");
  require_close(lu_det(tr2).real(), 21.0, 1e-10, "det tr2");

  const Verdict sum = check_det_sum(fix);
  require(sum.holds, "det_sum must hold on the fixture");
  require_close(unnorm(sum, "lhs_tr_pow", 4) + unnorm(sum, "lhs_det_a", 4), 10024.0,
                1e-10, "det_sum lhs");
  require_close(unnorm(sum, "rhs_det_tr1_pow", 4) + unnorm(sum, "rhs_det_tr2_pow", 4),
                1017.0, 1e-10, "det_sum rhs");

  const Verdict abs = check_det_abs(fix);
  require(abs.holds, "det_abs must hold on the fixture");
  require_close(unnorm(abs, "lhs_tr_pow", 4) + unnorm(abs, "lhs_neg_det_tr2_pow", 4),
                9559.0, 1e-10, "det_abs lhs");
  require_close(unnorm(abs, "rhs_abs_det_diff", 4), 552.0, 1e-10, "det_abs rhs");

  const Verdict swap = check_det_swap(fix);
  require(swap.holds, "det_swap must hold on the fixture");
  require_close(unnorm(swap, "lhs_tr_pow", 4) + unnorm(swap, "lhs_det_tr1_pow", 4),
                10576.0, 1e-10, "det_swap lhs");
  require_close(unnorm(swap, "rhs_det_a", 4) + unnorm(swap, "rhs_det_tr2_pow", 4),
                465.0, 1e-10, "det_swap rhs");

  const Verdict ppt = check_det_ppt(fix);
  require(ppt.holds, "det_ppt must hold on the fixture");
  require_close(unnorm(ppt, "lhs_tr_pow", 4) + unnorm(ppt, "lhs_det_tr2_pow", 4),
                10441.0, 1e-10, "det_ppt lhs");
  require_close(unnorm(ppt, "rhs_det_a", 4) + unnorm(ppt, "rhs_det_tr1_pow", 4),
                600.0, 1e-10, "det_ppt rhs");

  // Loewner difference spectra, rebuilt from public operations.
  const double tr = trace(fix.data).real();
  const ComplexMatrix sum_diff = ComplexMatrix::identity(4) * Complex{tr, 0.0} +
                                 fix.data - embed_left(tr1, 2).data -
                                 embed_right(tr2, 2).data;
  const Spectrum sum_spec = hermitian_eig(sum_diff);
  const double want_sum[4] = {4.0, 3.0, 2.0, 1.0};
  for (int k = 0; k < 4; ++k) {
    require_close(sum_spec.eigenvalues[k], want_sum[k], 1e-10, "loewner_sum spectrum");
  }

  const ComplexMatrix diff_diff = ComplexMatrix::identity(4) * Complex{tr, 0.0} +
                                  embed_left(tr1, 2).data - fix.data -
                                  embed_right(tr2, 2).data;
  const Spectrum diff_spec = hermitian_eig(diff_diff);
  const double want_diff[4] = {11.0, 10.0, 5.0, 4.0};
  for (int k = 0; k < 4; ++k) {
    require_close(diff_spec.eigenvalues[k], want_diff[k], 1e-10, "loewner_diff spectrum");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  require(elapsed < 0.1, "fixture replay took " + std::to_string(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 2. Randomized suite over five block shapes for the six PSD checkers.
// ---------------------------------------------------------------------------
void criterion_randomized_suite() {
  const auto started = std::chrono::steady_clock::now();
  SuiteConfig cfg;
  cfg.checks = {"det_sum", "det_abs", "det_swap", "loewner_sum", "loewner_diff",
                "ppt_map"};
  cfg.dims = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}};
  cfg.trials = 1000;
  cfg.seed = 20240;
  cfg.workers = 1;
  const SuiteReport report = run_suite(cfg);
  require(report.rows.size() == 30000, "expected 30000 rows");
  for (const Row& row : report.rows) {
    require(row.hypothesis_ok, row.check + ": hypothesis failed at index " +
                                   std::to_string(row.index));
    require(row.verdict.holds, row.check + ": violated at index " +
                                   std::to_string(row.index) + " gap " +
                                   std::to_string(row.verdict.gap));
    const bool loewner = check_info(row.check).loewner;
    if (!loewner) {
      require(row.verdict.gap >= -1e-9, row.check + ": scalar gap " +
                                            std::to_string(row.verdict.gap));
    } else {
      require(row.verdict.gap >= -row.verdict.tolerance,
              row.check + ": eigenvalue gap " + std::to_string(row.verdict.gap));
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  require(elapsed < 120.0, "suite took " + std::to_string(elapsed) + " s");
}

// ---------------------------------------------------------------------------
// 3. Schatten family across exponents, with the trace-norm equality at q=1.
// ---------------------------------------------------------------------------
void criterion_schatten() {
  SuiteConfig cfg;
  cfg.checks = {"schatten"};
  cfg.dims = {{2, 2}, {3, 2}};
  cfg.trials = 500;
  cfg.seed = 20241;
  const SuiteReport report = run_suite(cfg);
  require(report.rows.size() == 500 * 2 * 4, "expected 4000 rows");
  for (const Row& row : report.rows) {
    require(row.verdict.holds, "schatten violated at index " + std::to_string(row.index));
    const double q = row.verdict.term("q");
    if (q == 1.0) {
      require(std::abs(row.verdict.gap) <= 1e-9,
              "q=1 gap " + std::to_string(row.verdict.gap) + " at index " +
                  std::to_string(row.index));
    }
  }
}

// ---------------------------------------------------------------------------
// 4. Separable instances are PPT and satisfy the PPT determinant bound.
// ---------------------------------------------------------------------------
void criterion_ppt() {
  const std::pair<int, int> dims[] = {{2, 2}, {2, 3}, {3, 2}};
  for (const auto& [m, n] : dims) {
    for (int trial = 0; trial < 500; ++trial) {
      GeneratorConfig gc;
      gc.seed = 20242u + static_cast<std::uint64_t>(trial) * 7u +
                static_cast<std::uint64_t>(m * 100 + n);
      gc.m = m;
      gc.n = n;
      const BlockMatrix a = rand_ppt_separable(gc);
      require(is_ppt(a).is_ppt, "separable draw not PPT");
      const Verdict v = check_det_ppt(a);
      require(v.holds && v.gap >= -1e-9,
              "det_ppt gap " + std::to_string(v.gap) + " at (" + std::to_string(m) +
                  "," + std::to_string(n) + ") trial " + std::to_string(trial));
    }
  }
}

// ---------------------------------------------------------------------------
// 5. Sector suite: the three sector checkers across four angles, the
//    alpha = 0 reduction and the tight diagonal family.
// ---------------------------------------------------------------------------
void criterion_sector() {
  const double angles[] = {0.0, kPi / 6, kPi / 4, kPi / 3};
  const std::pair<int, int> dims[] = {{2, 2}, {3, 2}};
  for (double alpha : angles) {
    for (const auto& [m, n] : dims) {
      for (int trial = 0; trial < 500; ++trial) {
        const std::uint64_t seed = 20243u + static_cast<std::uint64_t>(trial) * 13u +
                                   static_cast<std::uint64_t>(m * 1000 + n) +
                                   static_cast<std::uint64_t>(alpha * 1e6);
        const ComplexMatrix raw = rand_sector(m * n, SectorParams(alpha), seed);
        const BlockMatrix a(m, n, raw);

        const Verdict main = check_sector_main(a, SectorParams(alpha));
        require(main.holds, "sector_main violated, gap " + std::to_string(main.gap));
        const Verdict det = check_sector_det(a.data);
        require(det.holds, "sector_det violated, gap " + std::to_string(det.gap));
        const Verdict re = check_re_singular(a.data);
        require(re.holds, "re_singular violated, gap " + std::to_string(re.gap));

        if (alpha == 0.0) {
          const Verdict swap = check_det_swap(a);
          require(std::abs(main.gap - swap.gap) <= 1e-10,
                  "alpha=0 reduction differs by " +
                      std::to_string(std::abs(main.gap - swap.gap)));
        }
      }
    }
  }

  // diag(1 +- i tan(alpha)) is tight for the sector determinant bound and
  // for the determinant part of re_singular.
  for (double alpha : {kPi / 6, kPi / 4, kPi / 3}) {
    const double t = std::tan(alpha);
    ComplexMatrix pair(2, 2);
    pair(0, 0) = Complex{1.0, t};
    pair(1, 1) = Complex{1.0, -t};
    const double scale = 1.0 + t * t;
    const Verdict det = check_sector_det(pair);
    require(std::abs(det.gap) <= 1e-9 * scale,
            "sector_det not tight, gap " + std::to_string(det.gap));
    const Verdict re = check_re_singular(pair);
    require(std::abs(re.term("gap_det")) <= 1e-9 * scale,
            "re_singular det part not tight, gap " +
                std::to_string(re.term("gap_det")));
  }
}

// ---------------------------------------------------------------------------
// 6. Four-matrix determinant lemma and its three-matrix consequence.
// ---------------------------------------------------------------------------
void criterion_det_lemmas() {
  for (int ell : {2, 3, 4}) {
    for (int trial = 0; trial < 500; ++trial) {
      const std::uint64_t seed =
          20244u + static_cast<std::uint64_t>(ell) * 100000u + trial;
      const Quadruple q = rand_lemma_quadruple(ell, seed);
      require(quadruple_preconditions_ok(q), "quadruple preconditions failed");
      const Verdict v = check_det_four(q);
      require(v.holds && v.gap >= -v.tolerance,
              "det_four gap " + std::to_string(v.gap) + " at ell " +
                  std::to_string(ell));
    }
  }
  for (int ell : {2, 3}) {
    for (int trial = 0; trial < 500; ++trial) {
      const std::uint64_t base =
          20245u + static_cast<std::uint64_t>(ell) * 100000u + trial * 3u;
      const Verdict v = check_det_three(rand_gram(ell, base), rand_gram(ell, base + 1),
                                        rand_gram(ell, base + 2));
      require(v.holds, "det_three gap " + std::to_string(v.gap));
    }
  }
}

// ---------------------------------------------------------------------------
// 7. Cross-oracle agreement: pairing identities, the Kronecker determinant
//    identity, and the support-function grid estimate of the sector angle.
// ---------------------------------------------------------------------------
void criterion_oracles() {
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 2 + trial % 2;
    GeneratorConfig gc;
    gc.seed = 20246u + trial;
    gc.m = m;
    gc.n = n;
    const BlockMatrix a = rand_psd_block(gc);
    const ComplexMatrix x = rand_hermitian(n, 30000u + trial);
    const ComplexMatrix y = rand_hermitian(m, 40000u + trial);
    const double scale = std::max(
        1.0, frobenius_norm(a.data) * std::max(frobenius_norm(x), frobenius_norm(y)));
    const Complex lhs1 = frobenius_inner(embed_left(x, m).data, a.data);
    const Complex rhs1 = frobenius_inner(x, partial_trace_1(a));
    require(std::abs(lhs1 - rhs1) <= 1e-10 * scale, "tr1 pairing identity");
    const Complex lhs2 = frobenius_inner(embed_right(y, n).data, a.data);
    const Complex rhs2 = frobenius_inner(y, partial_trace_2(a));
    require(std::abs(lhs2 - rhs2) <= 1e-10 * scale, "tr2 pairing identity");
  }

  Rng rng(20247);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix x = oracles::random_complex(rng, 2, 2);
    const ComplexMatrix y = oracles::random_complex(rng, 3, 3);
    const Complex dx = lu_det(x);
    const Complex dy = lu_det(y);
    const Complex rhs = dx * dx * dx * dy * dy;
    const Complex lhs = lu_det(kron(x, y));
    require(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)),
            "Kronecker determinant identity");
  }

  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = (trial % 3 == 0) ? kPi / 6 : (trial % 3 == 1 ? kPi / 4 : kPi / 3);
    const ComplexMatrix a =
        rand_sector(2 + trial % 3, SectorParams(alpha), 20248u + trial);
    const double algebraic = sector_margin(a).alpha_min;
    const double grid = oracles::grid_sector_estimate(a);
    require(std::abs(algebraic - grid) <= 1e-6,
            "sector margin vs grid differ by " + std::to_string(std::abs(algebraic - grid)));
  }
}

// ---------------------------------------------------------------------------
// 8. Kernel health: eigensolver residuals and determinant cross-check.
// ---------------------------------------------------------------------------
void criterion_kernel_health() {
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 11;  // up to dim 12
    const ComplexMatrix h = rand_hermitian(d, 20249u + trial);
    const Spectrum s = hermitian_eig(h);
    const double scale = frobenius_norm(h);

    double resid = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        Complex acc{};
        for (int k = 0; k < d; ++k) {
          acc += s.eigenvectors(i, k) * s.eigenvalues[k] *
                 std::conj(s.eigenvectors(j, k));
        }
        resid += std::norm(h(i, j) - acc);
      }
    }
    require(std::sqrt(resid) <= 1e-10 * std::max(1.0, scale),
            "eig reconstruction residual " + std::to_string(std::sqrt(resid)));

    const ComplexMatrix unit =
        matmul(adjoint(s.eigenvectors), s.eigenvectors) - ComplexMatrix::identity(d);
    require(frobenius_norm(unit) <= 1e-10,
            "unitarity defect " + std::to_string(frobenius_norm(unit)));
  }

  Rng rng(20250);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;  // up to dim 5
    const ComplexMatrix a = oracles::random_complex(rng, d, d);
    const Complex expected = oracles::cofactor_det(a);
    const Complex got = lu_det(a);
    require(std::abs(got - expected) <= 1e-10 * std::max(1.0, std::abs(expected)),
            "lu_det vs cofactor");
  }
}

// ---------------------------------------------------------------------------
// 9. Byte-identical reports regardless of the worker count.
// ---------------------------------------------------------------------------
void criterion_determinism() {
  SuiteConfig cfg;
  cfg.checks = {"schatten", "det_abs", "det_ppt", "sector_main", "det_four",
                "det_three", "loewner_sum"};
  cfg.dims = {{2, 2}, {3, 2}};
  cfg.trials = 25;
  cfg.seed = 20251;

  cfg.workers = 1;
  const std::string serial = report_to_jsonl(run_suite(cfg));
  cfg.workers = 8;
  const std::string parallel = report_to_jsonl(run_suite(cfg));
  require(!serial.empty(), "empty report");
  require(serial == parallel, "reports differ between 1 and 8 workers");
}

// ---------------------------------------------------------------------------
// 10. Tightness search: the q=1 equality family is reachable, and the
//     best-gap trace never increases.
// ---------------------------------------------------------------------------
void criterion_search() {
  SearchConfig schatten;
  schatten.check = "schatten";
  schatten.dims = {{2, 2}};
  schatten.budget = 10000;
  schatten.seed = 20252;
  schatten.q = 1.0;
  const TightnessRecord eq = minimize_gap(schatten);
  require(eq.best_gap <= 1e-9,
          "schatten q=1 search best gap " + std::to_string(eq.best_gap));
  require(std::abs(re_evaluate(eq) - eq.best_gap) <= 1e-12, "re-evaluation drifted");

  SearchConfig main_cfg;
  main_cfg.check = "det_abs";
  main_cfg.dims = {{2, 2}, {3, 2}};
  main_cfg.budget = 3000;
  main_cfg.seed = 20253;
  const TightnessRecord record = minimize_gap(main_cfg);
  require(record.trace.size() == 3000, "trace length mismatch");
  for (std::size_t k = 1; k < record.trace.size(); ++k) {
    require(record.trace[k] <= record.trace[k - 1],
            "best-gap trace increased at step " + std::to_string(k));
  }
  require(std::abs(re_evaluate(record) - record.best_gap) <= 1e-12,
          "re-evaluation drifted");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "diagonal fixture reproduces the hand-computed table in < 0.1 s",
       criterion_fixture},
      {2, "1000-draw randomized suite over five block shapes, six checkers",
       criterion_randomized_suite},
      {3, "schatten suite, 500 draws x q in {1,2,3,inf} x two shapes",
       criterion_schatten},
      {4, "500 separable PPT draws per shape satisfy the PPT determinant bound",
       criterion_ppt},
      {5, "sector suite across four angles, alpha=0 reduction, tight diagonals",
       criterion_sector},
      {6, "four-determinant lemma and three-matrix consequence, 500 draws each",
       criterion_det_lemmas},
      {7, "pairing, Kronecker determinant and sector-grid oracle agreement",
       criterion_oracles},
      {8, "eigensolver residuals and determinant cross-checks up to dim 12",
       criterion_kernel_health},
      {9, "byte-identical reports at --workers 1 and --workers 8",
       criterion_determinism},
      {10, "tightness search reaches the q=1 equality family, monotone trace",
       criterion_search},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto started = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const Failure& f) {
      failure = f.detail;
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    if (failure.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.2f s)\n", criterion.number,
                  criterion.description.c_str(), elapsed);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.2f s) -- %s\n", criterion.number,
                  criterion.description.c_str(), elapsed, failure.c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  } else {
    std::printf("all %zu criteria passed\n", criteria.size());
  }
  return failures;
}
