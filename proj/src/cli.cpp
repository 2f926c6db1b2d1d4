#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blocktrace/harness.hpp"

namespace blocktrace {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::vector<std::string> parse_checks(const std::string& arg, bool eval_mode) {
  std::vector<std::string> ids;
  if (arg == "all") {
    for (const CheckInfo& info : check_catalog()) {
      // Multi-matrix checks cannot run on a single loaded matrix.
      if (eval_mode && (info.klass == HypothesisClass::Quadruple ||
                        info.klass == HypothesisClass::PsdTriple)) {
        continue;
      }
      ids.push_back(info.id);
    }
    return ids;
  }
  for (const std::string& id : split(arg, ',')) {
    if (!is_known_check(id)) throw UsageError("unknown check '" + id + "'");
    ids.push_back(id);
  }
  if (ids.empty()) throw UsageError("no checks requested");
  return ids;
}

std::vector<std::pair<int, int>> parse_dims(const std::string& arg) {
  std::vector<std::pair<int, int>> dims;
  for (const std::string& part : split(arg, ',')) {
    const auto x = part.find('x');
    if (x == std::string::npos) {
      throw UsageError("dimension '" + part + "' is not of the form MxN");
    }
    try {
      const int m = std::stoi(part.substr(0, x));
      const int n = std::stoi(part.substr(x + 1));
      if (m < 1 || n < 1) throw UsageError("dimensions must be positive");
      dims.emplace_back(m, n);
    } catch (const std::logic_error&) {
      throw UsageError("dimension '" + part + "' is not of the form MxN");
    }
  }
  if (dims.empty()) throw UsageError("no dimensions given");
  return dims;
}

double parse_real(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw UsageError("bad number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("bad number '" + text + "'");
  }
}

std::vector<double> parse_reals(const std::string& arg) {
  std::vector<double> values;
  for (const std::string& part : split(arg, ',')) values.push_back(parse_real(part));
  if (values.empty()) throw UsageError("empty number list");
  return values;
}

// Either one number applied to every requested check, or a comma list of
// check=value entries.
std::map<std::string, double> parse_tol(const std::string& arg,
                                        const std::vector<std::string>& checks) {
  std::map<std::string, double> overrides;
  if (arg.find('=') == std::string::npos) {
    const double v = parse_real(arg);
    for (const std::string& id : checks) overrides[id] = v;
    return overrides;
  }
  for (const std::string& part : split(arg, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw UsageError("tolerance entry '" + part + "' is not check=value");
    }
    const std::string id = part.substr(0, eq);
    if (!is_known_check(id)) throw UsageError("unknown check '" + id + "'");
    overrides[id] = parse_real(part.substr(eq + 1));
  }
  return overrides;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

void print_summary(const SuiteReport& report, std::ostream& os) {
  for (const CheckAggregate& agg : report.aggregates) {
    os << agg.check << ": " << agg.holds << "/" << agg.count << " hold";
    if (agg.violations > 0) os << ", " << agg.violations << " VIOLATIONS";
    if (agg.hypothesis_errors > 0) {
      os << ", " << agg.hypothesis_errors << " hypothesis errors";
    }
    if (agg.count > agg.hypothesis_errors) {
      os << ", min gap " << agg.min_gap << " at index " << agg.argmin_index << " ("
         << agg.argmin_m << "x" << agg.argmin_n << ")";
    }
    os << "\n";
  }
  os << "wall time " << report.wall_seconds << " s\n";
}

struct CommonFlags {
  std::string checks = "all";
  std::string dims = "2x2";
  int trials = 100;
  std::uint64_t seed = 0;
  std::string tol;
  std::string alphas;
  std::string qs;
  std::string out;
  std::string format = "jsonl";
  int workers = 1;
};

int run_verify(const CommonFlags& flags) {
  SuiteConfig cfg;
  cfg.checks = parse_checks(flags.checks, false);
  cfg.dims = parse_dims(flags.dims);
  cfg.trials = flags.trials;
  cfg.seed = flags.seed;
  cfg.workers = flags.workers;
  if (!flags.tol.empty()) cfg.tol_overrides = parse_tol(flags.tol, cfg.checks);
  if (!flags.alphas.empty()) cfg.alphas = parse_reals(flags.alphas);
  if (!flags.qs.empty()) cfg.qs = parse_reals(flags.qs);
  if (flags.format != "jsonl" && flags.format != "csv") {
    throw UsageError("format must be jsonl or csv");
  }

  const SuiteReport report = run_suite(cfg);
  const std::string text =
      flags.format == "csv" ? report_to_csv(report) : report_to_jsonl(report);
  if (!flags.out.empty()) {
    write_text(flags.out, text);
  } else {
    std::cout << text;
  }
  print_summary(report, std::cerr);
  return suite_exit_code(report);
}

int run_search(const CommonFlags& flags, bool explore) {
  const std::vector<std::string> checks = parse_checks(flags.checks, false);
  if (checks.size() != 1) throw UsageError("search takes exactly one check");
  SearchConfig cfg;
  cfg.check = checks.front();
  cfg.dims = parse_dims(flags.dims);
  cfg.budget = flags.trials;
  cfg.seed = flags.seed;
  cfg.explore = explore;
  if (!flags.qs.empty()) cfg.q = parse_reals(flags.qs).front();
  if (!flags.alphas.empty()) cfg.alpha = parse_reals(flags.alphas).front();

  const TightnessRecord record = minimize_gap(cfg);
  nlohmann::ordered_json summary;
  summary["check"] = record.check;
  summary["m"] = record.m;
  summary["n"] = record.n;
  summary["seed"] = record.seed;
  summary["restart"] = record.restart;
  summary["best_gap"] = record.best_gap;
  summary["evaluations"] = record.evaluations;
  summary["accepted_steps"] = record.accepted_steps;
  summary["trace_length"] = record.trace.size();
  summary["explore"] = record.explore;
  summary["re_evaluated_gap"] = re_evaluate(record);
  std::cout << summary.dump() << "\n";

  if (!flags.out.empty()) {
    if (const auto* block = std::get_if<BlockMatrix>(&record.best_instance)) {
      save_matrix(flags.out, *block);
    } else {
      std::cerr << "best instance is not a single matrix; nothing written to '"
                << flags.out << "'\n";
    }
  }
  return 0;
}

int run_gen(const CommonFlags& flags) {
  const std::vector<std::string> checks = parse_checks(flags.checks, false);
  if (checks.size() != 1) throw UsageError("gen takes exactly one check");
  const CheckInfo& info = check_info(checks.front());
  if (info.klass == HypothesisClass::Quadruple ||
      info.klass == HypothesisClass::PsdTriple) {
    throw UsageError("gen supports only single-matrix hypothesis classes");
  }
  const auto dims = parse_dims(flags.dims);
  if (dims.size() != 1) throw UsageError("gen takes exactly one dimension pair");
  if (flags.out.empty()) throw UsageError("gen requires --out");
  std::optional<double> alpha;
  if (info.klass == HypothesisClass::SectorBlock) {
    alpha = flags.alphas.empty() ? 0.7853981633974483 : parse_reals(flags.alphas).front();
  }
  const Instance inst =
      derive_instance(info, dims[0].first, dims[0].second, flags.seed, 0, alpha);
  save_matrix(flags.out, std::get<BlockMatrix>(inst));
  return 0;
}

int run_eval(const CommonFlags& flags, const std::string& in_path,
             bool alphas_given) {
  if (in_path.empty()) throw UsageError("eval requires --in");
  const BlockMatrix a = load_matrix(in_path);
  const std::vector<std::string> checks = parse_checks(flags.checks, true);
  std::map<std::string, double> tol_overrides;
  if (!flags.tol.empty()) tol_overrides = parse_tol(flags.tol, checks);
  std::vector<double> qs = {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  if (!flags.qs.empty()) qs = parse_reals(flags.qs);
  std::vector<std::optional<double>> alphas = {std::nullopt};
  if (alphas_given) {
    alphas.clear();
    for (double v : parse_reals(flags.alphas)) alphas.emplace_back(v);
  }

  SuiteReport report;
  const Instance inst{a};
  for (const std::string& id : checks) {
    const CheckInfo& info = check_info(id);
    if (info.klass == HypothesisClass::Quadruple ||
        info.klass == HypothesisClass::PsdTriple) {
      throw UsageError("check '" + id + "' needs multiple matrices and cannot "
                       "run on a single file");
    }
    const double tol = tol_overrides.count(id) ? tol_overrides.at(id)
                                               : default_tol_scale(info);
    auto emit = [&](std::optional<double> q, std::optional<double> alpha) {
      Row row;
      row.check = id;
      row.m = a.m;
      row.n = a.n;
      row.seed = 0;
      row.index = 0;
      try {
        row.verdict = evaluate_check(info, inst, q, alpha, tol);
        row.hypothesis_ok = true;
      } catch (const HypothesisError& err) {
        row.hypothesis_ok = false;
        row.verdict.id = id;
        row.verdict.holds = false;
        row.verdict.scale_note = err.what();
      }
      report.rows.push_back(std::move(row));
    };
    if (info.per_q) {
      for (double q : qs) emit(q, std::nullopt);
    } else if (id == "sector_main") {
      for (const auto& alpha : alphas) emit(std::nullopt, alpha);
    } else {
      emit(std::nullopt, std::nullopt);
    }
  }

  const std::string text =
      flags.format == "csv" ? report_to_csv(report) : report_to_jsonl(report);
  if (!flags.out.empty()) {
    write_text(flags.out, text);
  } else {
    std::cout << text;
  }

  bool any_violation = false;
  bool any_hypothesis_error = false;
  for (const Row& row : report.rows) {
    if (!row.hypothesis_ok) {
      any_hypothesis_error = true;
    } else if (!row.verdict.holds) {
      any_violation = true;
    }
  }
  if (any_violation) return 2;
  if (any_hypothesis_error) return 1;
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Verification harness for block-matrix trace inequalities"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string in_path;
  bool explore = false;

  auto add_common = [&](CLI::App* sub, bool with_workers) {
    sub->add_option("--checks", flags.checks, "comma list of check ids, or 'all'");
    sub->add_option("--dims", flags.dims, "comma list of MxN block dimensions");
    sub->add_option("--seed", flags.seed, "base seed");
    sub->add_option("--tol", flags.tol, "tolerance scale: value or check=value list");
    sub->add_option("--alpha", flags.alphas, "comma list of sector angles (radians)");
    sub->add_option("--q", flags.qs, "comma list of Schatten exponents ('inf' allowed)");
    sub->add_option("--out", flags.out, "output path");
    sub->add_option("--format", flags.format, "jsonl or csv");
    if (with_workers) {
      sub->add_option("--workers", flags.workers, "worker thread count");
    }
  };

  CLI::App* verify = app.add_subcommand("verify", "run randomized suites");
  verify->add_option("--trials", flags.trials, "trials per (check, dim)");
  add_common(verify, true);

  CLI::App* search = app.add_subcommand("search", "minimize an inequality gap");
  search->add_option("--trials", flags.trials, "evaluation budget");
  search->add_flag("--explore", explore,
                   "evaluate det_ppt on plain PSD draws without the PPT gate");
  add_common(search, false);

  CLI::App* gen = app.add_subcommand("gen", "write one generated instance");
  add_common(gen, false);

  CLI::App* eval = app.add_subcommand("eval", "evaluate checks on a matrix file");
  eval->add_option("--in", in_path, "matrix JSON file");
  add_common(eval, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_verify(flags);
    if (search->parsed()) return run_search(flags, explore);
    if (gen->parsed()) return run_gen(flags);
    if (eval->parsed()) return run_eval(flags, in_path, eval->count("--alpha") > 0);
    throw UsageError("no subcommand given");
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

}  // namespace blocktrace
