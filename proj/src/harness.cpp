#include "blocktrace/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace blocktrace {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

struct Task {
  const CheckInfo* info;
  int m;
  int n;
  int index;
};

double tol_for(const SuiteConfig& cfg, const CheckInfo& info) {
  auto it = cfg.tol_overrides.find(info.id);
  if (it != cfg.tol_overrides.end()) return it->second;
  return default_tol_scale(info);
}

Row hypothesis_error_row(const CheckInfo& info, int m, int n, std::uint64_t seed,
                         int index, const std::string& message) {
  Row row;
  row.check = info.id;
  row.m = m;
  row.n = n;
  row.seed = seed;
  row.index = index;
  row.hypothesis_ok = false;
  row.verdict.id = info.id;
  row.verdict.scale_note = message;
  row.verdict.holds = false;
  return row;
}

std::vector<Row> run_task(const SuiteConfig& cfg, const Task& task) {
  const CheckInfo& info = *task.info;
  const double tol = tol_for(cfg, info);
  std::vector<Row> rows;

  auto emit = [&](std::optional<double> q, std::optional<double> alpha) {
    Row row;
    row.check = info.id;
    row.m = task.m;
    row.n = task.n;
    row.seed = cfg.seed;
    row.index = task.index;
    try {
      const Instance inst =
          derive_instance(info, task.m, task.n, cfg.seed, task.index, alpha);
      row.verdict = evaluate_check(info, inst, q, alpha, tol);
      if (alpha) row.verdict.terms.emplace_back("gen_alpha", *alpha);
      row.hypothesis_ok = true;
    } catch (const HypothesisError& err) {
      row = hypothesis_error_row(info, task.m, task.n, cfg.seed, task.index,
                                 err.what());
      if (alpha) row.verdict.terms.emplace_back("gen_alpha", *alpha);
    }
    rows.push_back(std::move(row));
  };

  if (info.per_q) {
    for (double q : cfg.qs) emit(q, std::nullopt);
  } else if (info.per_alpha) {
    for (double alpha : cfg.alphas) emit(std::nullopt, alpha);
  } else {
    emit(std::nullopt, std::nullopt);
  }
  return rows;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = {
      {"schatten", HypothesisClass::PsdBlock, true, false, false},
      {"loewner_sum", HypothesisClass::PsdBlock, false, false, true},
      {"loewner_diff", HypothesisClass::PsdBlock, false, false, true},
      {"ppt_map", HypothesisClass::PsdBlock, false, false, true},
      {"det_sum", HypothesisClass::PsdBlock, false, false, false},
      {"det_abs", HypothesisClass::PsdBlock, false, false, false},
      {"det_swap", HypothesisClass::PsdBlock, false, false, false},
      {"det_ppt", HypothesisClass::PptSeparable, false, false, false},
      {"det_four", HypothesisClass::Quadruple, false, false, false},
      {"det_three", HypothesisClass::PsdTriple, false, false, false},
      {"sector_det", HypothesisClass::SectorBlock, false, true, false},
      {"re_singular", HypothesisClass::SectorBlock, false, true, false},
      {"sector_main", HypothesisClass::SectorBlock, false, true, false},
  };
  return catalog;
}

const CheckInfo& check_info(const std::string& id) {
  for (const CheckInfo& info : check_catalog()) {
    if (info.id == id) return info;
  }
  throw UsageError("unknown check '" + id + "'");
}

bool is_known_check(const std::string& id) {
  for (const CheckInfo& info : check_catalog()) {
    if (info.id == id) return true;
  }
  return false;
}

void SuiteConfig::validate() const {
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (dims.empty()) throw UsageError("at least one dimension pair is required");
  for (const auto& [m, n] : dims) {
    if (m < 1 || n < 1) throw UsageError("dimensions must be positive");
  }
  if (checks.empty()) throw UsageError("at least one check is required");
  for (const std::string& id : checks) check_info(id);
  for (const auto& [id, tol] : tol_overrides) {
    check_info(id);
    if (!std::isfinite(tol)) throw UsageError("tolerance override must be finite");
  }
  if (workers < 1) throw UsageError("workers must be >= 1");
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha < kHalfPi)) {
      throw UsageError("alpha values must lie in [0, pi/2)");
    }
  }
  if (alphas.empty()) throw UsageError("alpha list must be non-empty");
  if (qs.empty()) throw UsageError("q list must be non-empty");
  for (double q : qs) {
    if (!(q >= 1.0) && !(std::isinf(q) && q > 0)) {
      throw UsageError("q values must be >= 1 or inf");
    }
  }
}

std::uint64_t instance_stream(std::uint64_t seed, const std::string& check, int m,
                              int n, int index, std::optional<double> alpha) {
  std::uint64_t s = mix_stream(seed, fnv1a(check));
  s = mix_stream(s, static_cast<std::uint64_t>(m));
  s = mix_stream(s, static_cast<std::uint64_t>(n));
  s = mix_stream(s, static_cast<std::uint64_t>(index));
  if (alpha) s = mix_stream(s, std::bit_cast<std::uint64_t>(*alpha));
  return s;
}

Instance derive_instance(const CheckInfo& info, int m, int n, std::uint64_t seed,
                         int index, std::optional<double> alpha) {
  const std::uint64_t stream = instance_stream(seed, info.id, m, n, index, alpha);
  switch (info.klass) {
    case HypothesisClass::PsdBlock: {
      Rng rng(stream);
      const int mn = m * n;
      int rank = mn;
      // One draw in four is rank-deficient, exercising singular instances.
      if (mn > 1 && rng.next_unit() < 0.25) {
        rank = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(mn - 1));
      }
      GeneratorConfig cfg;
      cfg.seed = rng.next_u64();
      cfg.m = m;
      cfg.n = n;
      cfg.rank = rank;
      return rand_psd_block(cfg);
    }
    case HypothesisClass::PptSeparable: {
      GeneratorConfig cfg;
      cfg.seed = stream;
      cfg.m = m;
      cfg.n = n;
      return rand_ppt_separable(cfg);
    }
    case HypothesisClass::SectorBlock: {
      const double a = alpha.value_or(0.0);
      const ComplexMatrix mat = rand_sector(m * n, SectorParams(a), stream);
      return BlockMatrix(m, n, mat);
    }
    case HypothesisClass::Quadruple:
      return rand_lemma_quadruple(m * n, stream);
    case HypothesisClass::PsdTriple: {
      Triple t = {rand_gram(m * n, mix_stream(stream, 0)),
                  rand_gram(m * n, mix_stream(stream, 1)),
                  rand_gram(m * n, mix_stream(stream, 2))};
      return t;
    }
  }
  throw UsageError("derive_instance: unhandled hypothesis class");
}

Verdict evaluate_check(const CheckInfo& info, const Instance& instance,
                       std::optional<double> q, std::optional<double> alpha,
                       double tol_scale, bool enforce_hypothesis) {
  if (info.id == "schatten") {
    return check_schatten(std::get<BlockMatrix>(instance), q.value_or(1.0), tol_scale);
  }
  if (info.id == "loewner_sum") {
    return check_loewner_sum(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "loewner_diff") {
    return check_loewner_diff(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "ppt_map") {
    return check_ppt_map(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "det_sum") {
    return check_det_sum(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "det_abs") {
    return check_det_abs(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "det_swap") {
    return check_det_swap(std::get<BlockMatrix>(instance), tol_scale);
  }
  if (info.id == "det_ppt") {
    return check_det_ppt(std::get<BlockMatrix>(instance), tol_scale, enforce_hypothesis);
  }
  if (info.id == "det_four") {
    return check_det_four(std::get<Quadruple>(instance), tol_scale);
  }
  if (info.id == "det_three") {
    const Triple& t = std::get<Triple>(instance);
    return check_det_three(t[0], t[1], t[2], tol_scale);
  }
  if (info.id == "sector_det") {
    return check_sector_det(std::get<BlockMatrix>(instance).data, tol_scale);
  }
  if (info.id == "re_singular") {
    return check_re_singular(std::get<BlockMatrix>(instance).data, tol_scale);
  }
  if (info.id == "sector_main") {
    std::optional<SectorParams> sector;
    if (alpha) sector.emplace(*alpha);
    return check_sector_main(std::get<BlockMatrix>(instance), sector, tol_scale);
  }
  throw UsageError("evaluate_check: unknown check '" + info.id + "'");
}

double default_tol_scale(const CheckInfo& info) {
  return info.loewner ? kLoewnerTol : kScalarTol;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  std::vector<Task> tasks;
  for (const std::string& id : cfg.checks) {
    const CheckInfo& info = check_info(id);
    for (const auto& [m, n] : cfg.dims) {
      for (int index = 0; index < cfg.trials; ++index) {
        tasks.push_back(Task{&info, m, n, index});
      }
    }
  }

  std::vector<std::vector<Row>> slots(tasks.size());
  const int workers = std::min<int>(cfg.workers, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) slots[t] = run_task(cfg, tasks[t]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t t = next.fetch_add(1);
          if (t >= tasks.size()) break;
          slots[t] = run_task(cfg, tasks[t]);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  SuiteReport report;
  report.config = cfg;
  for (std::vector<Row>& slot : slots) {
    for (Row& row : slot) report.rows.push_back(std::move(row));
  }

  for (const std::string& id : cfg.checks) {
    CheckAggregate agg;
    agg.check = id;
    for (const Row& row : report.rows) {
      if (row.check != id) continue;
      agg.count += 1;
      if (!row.hypothesis_ok) {
        agg.hypothesis_errors += 1;
        continue;
      }
      if (row.verdict.holds) {
        agg.holds += 1;
      } else {
        agg.violations += 1;
      }
      if (row.verdict.gap < agg.min_gap) {
        agg.min_gap = row.verdict.gap;
        agg.argmin_index = row.index;
        agg.argmin_m = row.m;
        agg.argmin_n = row.n;
      }
    }
    report.aggregates.push_back(agg);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

nlohmann::ordered_json row_to_json(const Row& row) {
  nlohmann::ordered_json obj;
  obj["check"] = row.check;
  obj["m"] = row.m;
  obj["n"] = row.n;
  obj["seed"] = row.seed;
  obj["index"] = row.index;
  obj["lhs"] = row.verdict.lhs;
  obj["rhs"] = row.verdict.rhs;
  obj["gap"] = row.verdict.gap;
  obj["tolerance"] = row.verdict.tolerance;
  obj["holds"] = row.verdict.holds;
  obj["hypothesis_ok"] = row.hypothesis_ok;
  obj["scale_note"] = row.verdict.scale_note;
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const auto& [name, value] : row.verdict.terms) {
    // JSON has no literal for IEEE specials; "inf" shows up as the Schatten
    // exponent of the spectral norm.
    if (std::isfinite(value)) {
      terms[name] = value;
    } else if (std::isnan(value)) {
      terms[name] = "nan";
    } else {
      terms[name] = value > 0 ? "inf" : "-inf";
    }
  }
  obj["terms"] = terms;
  return obj;
}

namespace {

double term_number(const nlohmann::json& value) {
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw IoError("replay: unrecognized term value '" + text + "'");
  }
  return value.get<double>();
}

}  // namespace

std::string report_to_jsonl(const SuiteReport& report) {
  std::string out;
  for (const Row& row : report.rows) {
    out += row_to_json(row).dump();
    out += '\n';
  }
  return out;
}

namespace {

std::string csv_quote(const std::string& text) {
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string csv_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string report_to_csv(const SuiteReport& report) {
  std::string out =
      "check,m,n,seed,index,lhs,rhs,gap,tolerance,holds,hypothesis_ok,scale_note,terms\n";
  for (const Row& row : report.rows) {
    std::ostringstream line;
    line << row.check << ',' << row.m << ',' << row.n << ',' << row.seed << ','
         << row.index << ',' << csv_double(row.verdict.lhs) << ','
         << csv_double(row.verdict.rhs) << ',' << csv_double(row.verdict.gap) << ','
         << csv_double(row.verdict.tolerance) << ','
         << (row.verdict.holds ? "true" : "false") << ','
         << (row.hypothesis_ok ? "true" : "false") << ','
         << csv_quote(row.verdict.scale_note) << ',';
    std::string terms;
    for (const auto& [name, value] : row.verdict.terms) {
      if (!terms.empty()) terms += ';';
      terms += name + "=" + csv_double(value);
    }
    line << csv_quote(terms) << '\n';
    out += line.str();
  }
  return out;
}

Verdict replay_row(const nlohmann::json& row) {
  const CheckInfo& info = check_info(row.at("check").get<std::string>());
  const int m = row.at("m").get<int>();
  const int n = row.at("n").get<int>();
  const std::uint64_t seed = row.at("seed").get<std::uint64_t>();
  const int index = row.at("index").get<int>();
  std::optional<double> q;
  std::optional<double> alpha;
  if (row.contains("terms")) {
    const auto& terms = row.at("terms");
    if (terms.contains("q")) q = term_number(terms.at("q"));
    if (terms.contains("gen_alpha")) alpha = term_number(terms.at("gen_alpha"));
  }
  const Instance inst = derive_instance(info, m, n, seed, index, alpha);
  return evaluate_check(info, inst, q, alpha, default_tol_scale(info));
}

int suite_exit_code(const SuiteReport& report) {
  for (const Row& row : report.rows) {
    if (row.hypothesis_ok && !row.verdict.holds) return 2;
  }
  return 0;
}

}  // namespace blocktrace
