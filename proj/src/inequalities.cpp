#include "blocktrace/inequalities.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace blocktrace {

namespace {

double ipow(double base, int exp) {
  double acc = 1.0;
  for (int i = 0; i < exp; ++i) acc *= base;
  return acc;
}

// Accumulates named summands; lhs/rhs are the floating sums in insertion
// order, so a reader of the report can recompose them exactly.
class VerdictBuilder {
 public:
  explicit VerdictBuilder(std::string id) { verdict_.id = std::move(id); }

  void lhs(const std::string& name, double value) {
    verdict_.terms.emplace_back("lhs_" + name, value);
    verdict_.lhs += value;
  }
  void rhs(const std::string& name, double value) {
    verdict_.terms.emplace_back("rhs_" + name, value);
    verdict_.rhs += value;
  }
  void info(const std::string& name, double value) {
    verdict_.terms.emplace_back(name, value);
  }
  void note(std::string text) { verdict_.scale_note = std::move(text); }

  Verdict finish(double tolerance) {
    verdict_.tolerance = tolerance;
    verdict_.gap = verdict_.lhs - verdict_.rhs;
    verdict_.holds = verdict_.gap >= -tolerance;
    return std::move(verdict_);
  }

  // Scalar-inequality tolerance, relative to the recomposed sides.
  Verdict finish_scalar(double tol_scale) {
    return finish(tol_scale *
                  std::max({1.0, std::abs(verdict_.lhs), std::abs(verdict_.rhs)}));
  }

 private:
  Verdict verdict_;
};

void require_psd_hypothesis(const BlockMatrix& a, const char* check) {
  const PsdVerdict v = is_psd(a.data);
  if (!v.is_psd) {
    std::ostringstream msg;
    msg << check << ": input is not PSD (lambda_min " << v.lambda_min
        << ", tolerance " << v.tolerance_used << ")";
    throw HypothesisError(msg.str());
  }
}

void require_psd_plain(const ComplexMatrix& a, const char* check, const char* role) {
  const PsdVerdict v = is_psd(a);
  if (!v.is_psd) {
    std::ostringstream msg;
    msg << check << ": " << role << " is not PSD (lambda_min " << v.lambda_min << ")";
    throw HypothesisError(msg.str());
  }
}

// Divides out the trace. All determinantal comparisons run on the
// normalized copy: every compared term is degree-mn homogeneous, so the
// truth value is unchanged while (tr A)^{mn} stays representable.
struct TraceNormalized {
  BlockMatrix a;
  double scale;
};

TraceNormalized normalize_by_trace(const BlockMatrix& a) {
  const double t = trace(a.data).real();
  if (t <= 0.0) return {a, 1.0};
  return {BlockMatrix(a.m, a.n, a.data * Complex{1.0 / t, 0.0}), t};
}

struct DetTerms {
  double tr_pow = 0.0;       // (tr A)^{mn}
  double det_a = 0.0;        // det A
  double det_tr1_pow = 0.0;  // det(tr1 A)^m
  double det_tr2_pow = 0.0;  // det(tr2 A)^n
};

DetTerms det_terms(const BlockMatrix& a) {
  DetTerms t;
  const int mn = a.m * a.n;
  t.tr_pow = ipow(trace(a.data).real(), mn);
  t.det_a = lu_det(a.data).real();
  t.det_tr1_pow = ipow(lu_det(partial_trace_1(a)).real(), a.m);
  t.det_tr2_pow = ipow(lu_det(partial_trace_2(a)).real(), a.n);
  return t;
}

std::string trace_note(double scale, int mn) {
  std::ostringstream note;
  note << "input divided by tr = " << scale << "; every term scales by tr^" << mn;
  return note.str();
}

double min_eigenvalue(const ComplexMatrix& h) {
  const Spectrum spec = hermitian_eig(h);
  return spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back();
}

}  // namespace

double Verdict::term(const std::string& name) const {
  for (const auto& [key, value] : terms) {
    if (key == name) return value;
  }
  throw DomainError("Verdict: no term named '" + name + "' in " + id);
}

Verdict check_schatten(const BlockMatrix& a, double q, double tol_scale) {
  require_psd_hypothesis(a, "schatten");
  VerdictBuilder b("schatten");
  b.lhs("trace", trace(a.data).real());
  b.lhs("norm_a", schatten_norm(a.data, q));
  b.rhs("norm_tr1", schatten_norm(partial_trace_1(a), q));
  b.rhs("norm_tr2", schatten_norm(partial_trace_2(a), q));
  b.info("q", q);
  return b.finish_scalar(tol_scale);
}

Verdict check_loewner_sum(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "loewner_sum");
  const int mn = a.m * a.n;
  const double tr = trace(a.data).real();
  const ComplexMatrix lhs_mat =
      ComplexMatrix::identity(mn) * Complex{tr, 0.0} + a.data;
  const ComplexMatrix rhs_mat = embed_left(partial_trace_1(a), a.m).data +
                                embed_right(partial_trace_2(a), a.n).data;
  const double lambda_min = min_eigenvalue(lhs_mat - rhs_mat);
  VerdictBuilder b("loewner_sum");
  b.lhs("lambda_min", lambda_min);
  b.info("trace", tr);
  b.note("gap = lambda_min(LHS - RHS)");
  return b.finish(tol_scale * std::max(1.0, frobenius_norm(a.data)));
}

Verdict check_loewner_diff(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "loewner_diff");
  const int mn = a.m * a.n;
  const double tr = trace(a.data).real();
  const ComplexMatrix diff = ComplexMatrix::identity(mn) * Complex{tr, 0.0} +
                             embed_left(partial_trace_1(a), a.m).data - a.data -
                             embed_right(partial_trace_2(a), a.n).data;
  VerdictBuilder b("loewner_diff");
  b.lhs("lambda_min", min_eigenvalue(diff));
  b.info("trace", tr);
  b.note("gap = lambda_min(LHS - RHS)");
  return b.finish(tol_scale * std::max(1.0, frobenius_norm(a.data)));
}

ComplexMatrix loewner_diff_certificate(const BlockMatrix& a) {
  if (a.m != 2) {
    throw DimensionError("loewner_diff_certificate: requires m = 2 blocks");
  }
  const ComplexMatrix a11 = block_at(a, 0, 0);
  const ComplexMatrix a12 = block_at(a, 0, 1);
  const ComplexMatrix a21 = block_at(a, 1, 0);
  const ComplexMatrix a22 = block_at(a, 1, 1);
  const ComplexMatrix eye = ComplexMatrix::identity(a.n);
  std::vector<std::vector<ComplexMatrix>> blocks(2);
  blocks[0] = {eye * trace(a22) + a22, Complex{-1.0, 0.0} * (a12 + eye * trace(a12))};
  blocks[1] = {Complex{-1.0, 0.0} * (a21 + eye * trace(a21)), eye * trace(a11) + a11};
  return assemble(blocks).data;
}

Verdict check_ppt_map(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "ppt_map");
  const ComplexMatrix eye = ComplexMatrix::identity(a.n);
  std::vector<std::vector<ComplexMatrix>> direct(a.m), swapped(a.m);
  for (int i = 0; i < a.m; ++i) {
    for (int j = 0; j < a.m; ++j) {
      const ComplexMatrix ij = block_at(a, i, j);
      const ComplexMatrix ji = block_at(a, j, i);
      direct[i].push_back(eye * trace(ij) + ij);
      swapped[i].push_back(eye * trace(ji) + ji);
    }
  }
  const double lambda_direct = min_eigenvalue(assemble(direct).data);
  const double lambda_swapped = min_eigenvalue(assemble(swapped).data);
  VerdictBuilder b("ppt_map");
  b.lhs("lambda_min", std::min(lambda_direct, lambda_swapped));
  b.info("lambda_min_direct", lambda_direct);
  b.info("lambda_min_swapped", lambda_swapped);
  b.note("gap = min over the direct and position-swapped images");
  return b.finish(tol_scale * std::max(1.0, frobenius_norm(a.data)));
}

Verdict check_det_sum(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "det_sum");
  const auto [norm, scale] = normalize_by_trace(a);
  const DetTerms t = det_terms(norm);
  VerdictBuilder b("det_sum");
  b.lhs("tr_pow", t.tr_pow);
  b.lhs("det_a", t.det_a);
  b.rhs("det_tr1_pow", t.det_tr1_pow);
  b.rhs("det_tr2_pow", t.det_tr2_pow);
  b.info("scale", scale);
  b.note(trace_note(scale, a.m * a.n));
  return b.finish_scalar(tol_scale);
}

Verdict check_det_abs(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "det_abs");
  const auto [norm, scale] = normalize_by_trace(a);
  const DetTerms t = det_terms(norm);
  const double branch = t.det_a - t.det_tr1_pow;
  VerdictBuilder b("det_abs");
  b.lhs("tr_pow", t.tr_pow);
  b.lhs("neg_det_tr2_pow", -t.det_tr2_pow);
  b.rhs("abs_det_diff", std::abs(branch));
  b.info("det_a", t.det_a);
  b.info("det_tr1_pow", t.det_tr1_pow);
  b.info("det_tr2_pow", t.det_tr2_pow);
  b.info("abs_branch", branch >= 0.0 ? 1.0 : -1.0);
  b.info("scale", scale);
  b.note(trace_note(scale, a.m * a.n));
  return b.finish_scalar(tol_scale);
}

Verdict check_det_swap(const BlockMatrix& a, double tol_scale) {
  require_psd_hypothesis(a, "det_swap");
  const auto [norm, scale] = normalize_by_trace(a);
  const DetTerms t = det_terms(norm);
  VerdictBuilder b("det_swap");
  b.lhs("tr_pow", t.tr_pow);
  b.lhs("det_tr1_pow", t.det_tr1_pow);
  b.rhs("det_a", t.det_a);
  b.rhs("det_tr2_pow", t.det_tr2_pow);
  b.info("scale", scale);
  b.note(trace_note(scale, a.m * a.n));
  return b.finish_scalar(tol_scale);
}

Verdict check_det_ppt(const BlockMatrix& a, double tol_scale, bool enforce_hypothesis) {
  if (enforce_hypothesis) {
    const PptVerdict v = is_ppt(a);
    if (!v.is_ppt) {
      std::ostringstream msg;
      msg << "det_ppt: input is not PPT (lambda_min " << v.direct.lambda_min
          << ", partial-transpose lambda_min " << v.transposed.lambda_min << ")";
      throw HypothesisError(msg.str());
    }
  }
  const auto [norm, scale] = normalize_by_trace(a);
  const DetTerms t = det_terms(norm);
  VerdictBuilder b("det_ppt");
  b.lhs("tr_pow", t.tr_pow);
  b.lhs("det_tr2_pow", t.det_tr2_pow);
  b.rhs("det_a", t.det_a);
  b.rhs("det_tr1_pow", t.det_tr1_pow);
  b.info("scale", scale);
  if (!enforce_hypothesis) {
    b.note(trace_note(scale, a.m * a.n) + "; PPT hypothesis NOT verified");
  } else {
    b.note(trace_note(scale, a.m * a.n));
  }
  return b.finish_scalar(tol_scale);
}

Verdict check_det_four(const ComplexMatrix& x, const ComplexMatrix& y,
                       const ComplexMatrix& w, const ComplexMatrix& z,
                       double tol_scale) {
  require_psd_plain(x, "det_four", "X");
  require_psd_plain(y, "det_four", "Y");
  require_psd_plain(w, "det_four", "W");
  require_psd_plain(z, "det_four", "Z");
  const struct {
    const char* name;
    PsdVerdict verdict;
  } conditions[] = {
      {"X >= W", loewner_ge(x, w, kLoewnerTol)},
      {"X >= Z", loewner_ge(x, z, kLoewnerTol)},
      {"X + Y >= W + Z", loewner_ge(x + y, w + z, kLoewnerTol)},
  };
  for (const auto& cond : conditions) {
    if (!cond.verdict.is_psd) {
      std::ostringstream msg;
      msg << "det_four: precondition " << cond.name << " fails (lambda_min "
          << cond.verdict.lambda_min << ")";
      throw HypothesisError(msg.str());
    }
  }
  VerdictBuilder b("det_four");
  b.lhs("det_x", lu_det(x).real());
  b.lhs("det_y", lu_det(y).real());
  b.rhs("det_w", lu_det(w).real());
  b.rhs("det_z", lu_det(z).real());
  return b.finish_scalar(tol_scale);
}

Verdict check_det_four(const Quadruple& q, double tol_scale) {
  return check_det_four(q.x, q.y, q.w, q.z, tol_scale);
}

Verdict check_det_three(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ComplexMatrix& c, double tol_scale) {
  if (a.rows() != b.rows() || a.rows() != c.rows()) {
    throw DimensionError("det_three: size mismatch");
  }
  require_psd_plain(a, "det_three", "A");
  require_psd_plain(b, "det_three", "B");
  require_psd_plain(c, "det_three", "C");
  VerdictBuilder builder("det_three");
  builder.lhs("det_abc", lu_det(a + b + c).real());
  builder.lhs("det_c", lu_det(c).real());
  builder.rhs("det_ac", lu_det(a + c).real());
  builder.rhs("det_bc", lu_det(b + c).real());
  return builder.finish_scalar(tol_scale);
}

Verdict check_sector_det(const ComplexMatrix& a, double tol_scale) {
  const SectorMargin margin = sector_margin(a);
  if (!margin.re_pd) {
    throw HypothesisError("sector_det: Re(a) is not positive definite");
  }
  const int n = a.rows();
  const double sec_alpha = 1.0 / std::cos(margin.alpha_min);
  const ComplexMatrix re = cartesian_parts(a).first;
  VerdictBuilder b("sector_det");
  b.lhs("sec_pow_det_re", ipow(sec_alpha, n) * lu_det(re).real());
  b.rhs("abs_det", std::abs(lu_det(a)));
  b.info("alpha", margin.alpha_min);
  b.note("alpha = measured sector margin");
  return b.finish_scalar(tol_scale);
}

Verdict check_re_singular(const ComplexMatrix& a, double tol_scale) {
  if (!a.square()) throw DimensionError("re_singular: matrix must be square");
  const auto [re, im] = cartesian_parts(a);
  const std::vector<double> s = singular_values(a);
  const Spectrum re_spec = hermitian_eig(re);

  double gap_eigen = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    gap_eigen = std::min(gap_eigen, s[i] - re_spec.eigenvalues[i]);
  }
  if (s.empty()) gap_eigen = 0.0;

  const double lambda_max_re = re_spec.eigenvalues.empty() ? 0.0 : re_spec.eigenvalues.front();
  const double lambda_min_re = re_spec.eigenvalues.empty() ? 0.0 : re_spec.eigenvalues.back();
  const bool re_pd = lambda_min_re > 1e-10 * std::max(1.0, lambda_max_re);

  VerdictBuilder b("re_singular");
  double min_gap = gap_eigen;
  double scale = std::max(1.0, frobenius_norm(a));
  if (re_pd) {
    const double gap_det =
        std::abs(lu_det(a)) - lu_det(re).real() - std::abs(lu_det(im));
    min_gap = std::min(gap_eigen, gap_det);
    b.lhs("min_gap", min_gap);
    b.info("gap_eigen", gap_eigen);
    b.info("gap_det", gap_det);
    b.info("re_pd", 1.0);
    b.note("both parts evaluated");
    scale = std::max({scale, std::abs(lu_det(a))});
  } else {
    b.lhs("min_gap", min_gap);
    b.info("gap_eigen", gap_eigen);
    b.info("re_pd", 0.0);
    b.note("determinant part skipped: Re(a) not positive definite");
  }
  return b.finish(tol_scale * scale);
}

Verdict check_sector_main(const BlockMatrix& a, std::optional<SectorParams> sector,
                          double tol_scale) {
  const SectorMargin margin = sector_margin(a.data);
  if (!margin.re_pd) {
    throw HypothesisError("sector_main: Re(a) is not positive definite");
  }
  const double alpha = sector ? sector->alpha : margin.alpha_min;
  // The generator guarantee is margin <= alpha within 1e-9; allow the same
  // slack here so boundary instances are not rejected.
  if (margin.alpha_min > alpha + 1e-9) {
    std::ostringstream msg;
    msg << "sector_main: measured margin " << margin.alpha_min
        << " exceeds requested alpha " << alpha;
    throw HypothesisError(msg.str());
  }

  double tr_abs = 0.0;
  for (double s : singular_values(a.data)) tr_abs += s;
  BlockMatrix norm = a;
  double scale = 1.0;
  if (tr_abs > 0.0) {
    norm = BlockMatrix(a.m, a.n, a.data * Complex{1.0 / tr_abs, 0.0});
    scale = tr_abs;
  }
  const int mn = a.m * a.n;
  double tr_abs_norm = 0.0;
  for (double s : singular_values(norm.data)) tr_abs_norm += s;
  const double cos_pow = ipow(std::cos(alpha), mn);
  const ComplexMatrix tr1 = partial_trace_1(norm);
  const ComplexMatrix tr2 = partial_trace_2(norm);

  VerdictBuilder b("sector_main");
  b.lhs("tr_abs_pow", ipow(tr_abs_norm, mn));
  b.lhs("abs_det_tr1_pow", ipow(std::abs(lu_det(tr1)), a.m));
  b.rhs("cos_pow_abs_det", cos_pow * std::abs(lu_det(norm.data)));
  b.rhs("cos_pow_abs_det_tr2_pow", cos_pow * ipow(std::abs(lu_det(tr2)), a.n));
  b.info("alpha", alpha);
  b.info("margin", margin.alpha_min);
  // Sector containment of the partial traces is recorded, not assumed.
  const SectorMargin margin1 = sector_margin(tr1);
  const SectorMargin margin2 = sector_margin(tr2);
  b.info("margin_tr1", margin1.alpha_min);
  b.info("margin_tr2", margin2.alpha_min);
  b.info("scale", scale);
  std::ostringstream note;
  note << "input divided by tr|A| = " << scale << "; every term scales by tr|A|^" << mn;
  b.note(note.str());
  return b.finish_scalar(tol_scale);
}

}  // namespace blocktrace
