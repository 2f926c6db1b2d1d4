#include <algorithm>
#include <cmath>
#include <utility>
#include <variant>

#include "blocktrace/harness.hpp"

namespace blocktrace {

namespace {

struct TripleLatent {
  int ell = 1;
  ComplexMatrix ga, gb, gc;
};

// Sector latents carry the block tags of the instance they materialize to.
struct SectorBlockLatent {
  int m = 1;
  int n = 1;
  SectorLatent inner;
};

using Latent = std::variant<PsdLatent, SeparableLatent, SectorBlockLatent,
                            QuadrupleLatent, TripleLatent>;

Instance latent_instance(const Latent& latent) {
  return std::visit(
      [](const auto& l) -> Instance {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, TripleLatent>) {
          return Triple{matmul(l.ga, adjoint(l.ga)), matmul(l.gb, adjoint(l.gb)),
                        matmul(l.gc, adjoint(l.gc))};
        } else if constexpr (std::is_same_v<T, SectorBlockLatent>) {
          return BlockMatrix(l.m, l.n, materialize(l.inner));
        } else {
          return materialize(l);
        }
      },
      latent);
}

// Every perturbable factor matrix of a latent.
std::vector<ComplexMatrix*> latent_factors(Latent& latent) {
  return std::visit(
      [](auto& l) -> std::vector<ComplexMatrix*> {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PsdLatent>) {
          return {&l.factor};
        } else if constexpr (std::is_same_v<T, SeparableLatent>) {
          std::vector<ComplexMatrix*> out;
          for (auto& f : l.left) out.push_back(&f);
          for (auto& f : l.right) out.push_back(&f);
          return out;
        } else if constexpr (std::is_same_v<T, SectorBlockLatent>) {
          return {&l.inner.b_factor, &l.inner.k_raw};
        } else if constexpr (std::is_same_v<T, QuadrupleLatent>) {
          return {&l.gw, &l.gz, &l.gs, &l.gu};
        } else {
          return {&l.ga, &l.gb, &l.gc};
        }
      },
      latent);
}

std::size_t coordinate_count(Latent& latent) {
  std::size_t count = 0;
  for (ComplexMatrix* f : latent_factors(latent)) count += 2 * f->size();
  if (std::holds_alternative<SectorBlockLatent>(latent)) count += 1;  // the mix scalar
  return count;
}

void perturb_coordinate(Latent& latent, Rng& rng, double sigma) {
  const std::size_t total = coordinate_count(latent);
  std::size_t pick = rng.next_u64() % total;
  if (auto* sector = std::get_if<SectorBlockLatent>(&latent)) {
    if (pick == total - 1) {
      sector->inner.mix =
          std::clamp(sector->inner.mix + sigma * rng.next_gaussian(), 0.0, 1.0);
      return;
    }
  }
  for (ComplexMatrix* f : latent_factors(latent)) {
    const std::size_t span = 2 * f->size();
    if (pick < span) {
      Complex& entry = f->data()[pick / 2];
      const double bump = sigma * rng.next_gaussian();
      if (pick % 2 == 0) {
        entry += Complex{bump, 0.0};
      } else {
        entry += Complex{0.0, bump};
      }
      return;
    }
    pick -= span;
  }
}

Latent draw_latent(const CheckInfo& info, const SearchConfig& cfg, int m, int n,
                   std::uint64_t stream) {
  const HypothesisClass klass =
      cfg.explore && info.id == "det_ppt" ? HypothesisClass::PsdBlock : info.klass;
  switch (klass) {
    case HypothesisClass::PsdBlock: {
      GeneratorConfig gc;
      gc.seed = stream;
      gc.m = m;
      gc.n = n;
      return draw_psd_latent(gc);
    }
    case HypothesisClass::PptSeparable: {
      GeneratorConfig gc;
      gc.seed = stream;
      gc.m = m;
      gc.n = n;
      return draw_separable_latent(gc);
    }
    case HypothesisClass::SectorBlock: {
      const double alpha = cfg.alpha.value_or(0.7853981633974483);  // pi/4
      return SectorBlockLatent{m, n, draw_sector_latent(m * n, SectorParams(alpha), stream)};
    }
    case HypothesisClass::Quadruple:
      return draw_quadruple_latent(m * n, stream);
    case HypothesisClass::PsdTriple: {
      Rng rng(mix_stream(stream, fnv1a("triple")));
      TripleLatent t;
      t.ell = m * n;
      auto gaussian = [&](int d) {
        ComplexMatrix g(d, d);
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) g(i, j) = rng.next_complex_gaussian();
        }
        return g;
      };
      t.ga = gaussian(t.ell);
      t.gb = gaussian(t.ell);
      t.gc = gaussian(t.ell);
      return t;
    }
  }
  throw UsageError("draw_latent: unhandled hypothesis class");
}

// Class membership is re-verified on the materialized instance before the
// checker runs; a perturbation that leaves the class is a rejected step.
bool hypothesis_ok(const Latent& latent, const Instance& inst, const SearchConfig& cfg) {
  if (std::holds_alternative<QuadrupleLatent>(latent)) {
    return quadruple_preconditions_ok(std::get<Quadruple>(inst));
  }
  if (std::holds_alternative<TripleLatent>(latent)) {
    const Triple& t = std::get<Triple>(inst);
    return is_psd(t[0]).is_psd && is_psd(t[1]).is_psd && is_psd(t[2]).is_psd;
  }
  if (const auto* sector = std::get_if<SectorBlockLatent>(&latent)) {
    const SectorMargin margin = sector_margin(std::get<BlockMatrix>(inst).data);
    return margin.re_pd && margin.alpha_min <= sector->inner.alpha + 1e-9;
  }
  if (std::holds_alternative<SeparableLatent>(latent) && !cfg.explore) {
    return is_ppt(std::get<BlockMatrix>(inst)).is_ppt;
  }
  return is_psd(std::get<BlockMatrix>(inst).data).is_psd;
}

}  // namespace

TightnessRecord minimize_gap(const SearchConfig& cfg) {
  if (cfg.budget < 1) throw UsageError("search budget must be >= 1");
  if (cfg.dims.empty()) throw UsageError("at least one dimension pair is required");
  const CheckInfo& info = check_info(cfg.check);
  const bool explore = cfg.explore && info.id == "det_ppt";

  TightnessRecord record;
  record.check = cfg.check;
  record.seed = cfg.seed;
  record.explore = explore;
  record.q = cfg.q;
  record.alpha = cfg.alpha;
  record.trace.reserve(static_cast<std::size_t>(cfg.budget));

  std::optional<double> alpha = cfg.alpha;
  if (info.klass == HypothesisClass::SectorBlock && !alpha) {
    alpha = 0.7853981633974483;
  }

  auto evaluate = [&](const Latent& latent) -> std::optional<std::pair<double, Instance>> {
    Instance inst = latent_instance(latent);
    if (!hypothesis_ok(latent, inst, cfg)) return std::nullopt;
    try {
      const Verdict v = evaluate_check(info, inst, cfg.q, alpha,
                                       default_tol_scale(info), !explore);
      return std::make_pair(v.gap, std::move(inst));
    } catch (const HypothesisError&) {
      return std::nullopt;
    }
  };

  auto note_eval = [&](std::optional<double> gap, const Instance* inst, int m, int n,
                       int restart) {
    record.evaluations += 1;
    if (gap && *gap < record.best_gap) {
      record.best_gap = *gap;
      record.best_instance = *inst;
      record.m = m;
      record.n = n;
      record.restart = restart;
    }
    record.trace.push_back(record.best_gap);
  };

  int restart = 0;
  while (record.evaluations < cfg.budget) {
    const auto [m, n] = cfg.dims[restart % cfg.dims.size()];
    const std::uint64_t stream =
        instance_stream(cfg.seed, cfg.check + "/search", m, n, restart, alpha);
    Rng walk_rng(mix_stream(stream, fnv1a("walk")));

    Latent current = draw_latent(info, cfg, m, n, stream);
    auto evaluated = evaluate(current);
    double current_gap = std::numeric_limits<double>::infinity();
    if (evaluated) current_gap = evaluated->first;
    note_eval(evaluated ? std::optional<double>(evaluated->first) : std::nullopt,
              evaluated ? &evaluated->second : nullptr, m, n, restart);

    double sigma = 0.3;
    int stale = 0;
    constexpr int kMaxStale = 80;
    while (record.evaluations < cfg.budget && stale < kMaxStale) {
      Latent candidate = current;
      perturb_coordinate(candidate, walk_rng, sigma);
      auto cand_eval = evaluate(candidate);
      const bool improved = cand_eval && cand_eval->first < current_gap;
      note_eval(cand_eval ? std::optional<double>(cand_eval->first) : std::nullopt,
                cand_eval ? &cand_eval->second : nullptr, m, n, restart);
      if (improved) {
        current = std::move(candidate);
        current_gap = cand_eval->first;
        record.accepted_steps += 1;
        stale = 0;
        sigma = std::min(sigma * 1.2, 1.0);
      } else {
        stale += 1;
        sigma = std::max(sigma * 0.9, 1e-3);
      }
    }
    restart += 1;
  }
  return record;
}

double re_evaluate(const TightnessRecord& record) {
  const CheckInfo& info = check_info(record.check);
  std::optional<double> alpha = record.alpha;
  if (info.klass == HypothesisClass::SectorBlock && !alpha) {
    alpha = 0.7853981633974483;
  }
  const Verdict v = evaluate_check(info, record.best_instance, record.q, alpha,
                                   default_tol_scale(info), !record.explore);
  return v.gap;
}

}  // namespace blocktrace
