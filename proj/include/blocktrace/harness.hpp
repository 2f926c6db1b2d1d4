#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blocktrace/generators.hpp"
#include "blocktrace/inequalities.hpp"
#include "blocktrace/matrix_io.hpp"

#include "json.hpp"

namespace blocktrace {

// Hypothesis class an instance is drawn from.
enum class HypothesisClass { PsdBlock, PptSeparable, SectorBlock, Quadruple, PsdTriple };

struct CheckInfo {
  std::string id;
  HypothesisClass klass;
  bool per_q = false;      // one row per Schatten exponent
  bool per_alpha = false;  // one instance per sector angle
  bool loewner = false;    // eigenvalue-scale tolerance rather than scalar
};

const std::vector<CheckInfo>& check_catalog();
const CheckInfo& check_info(const std::string& id);
bool is_known_check(const std::string& id);

using Triple = std::array<ComplexMatrix, 3>;
using Instance = std::variant<BlockMatrix, Quadruple, Triple>;

struct SuiteConfig {
  std::vector<std::string> checks;
  std::vector<std::pair<int, int>> dims;
  int trials = 100;
  std::uint64_t seed = 0;
  std::map<std::string, double> tol_overrides;
  std::vector<double> alphas = {0.0, 0.5235987755982988, 0.7853981633974483,
                                1.0471975511965976};  // 0, pi/6, pi/4, pi/3
  std::vector<double> qs = {1.0, 2.0, 3.0,
                            std::numeric_limits<double>::infinity()};
  int workers = 1;

  void validate() const;
};

// One report line: a Verdict plus the provenance needed to re-derive the
// instance ((check, m, n, seed, index), with q / gen_alpha in the terms).
struct Row {
  std::string check;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  int index = 0;
  bool hypothesis_ok = true;
  Verdict verdict;
};

struct CheckAggregate {
  std::string check;
  long count = 0;
  long holds = 0;
  long violations = 0;
  long hypothesis_errors = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  int argmin_index = -1;
  int argmin_m = 0;
  int argmin_n = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<Row> rows;
  std::vector<CheckAggregate> aggregates;
  double wall_seconds = 0.0;
};

// Derives the RNG stream for one instance from its provenance tuple.
// Sector instances additionally fold in the bit pattern of the angle.
std::uint64_t instance_stream(std::uint64_t seed, const std::string& check, int m,
                              int n, int index, std::optional<double> alpha = {});

// Deterministic instance for a report row; identical to what run_suite drew.
Instance derive_instance(const CheckInfo& info, int m, int n, std::uint64_t seed,
                         int index, std::optional<double> alpha = {});

// Evaluates one check on one instance. Hypothesis violations surface as
// HypothesisError, exactly as in the underlying checkers.
Verdict evaluate_check(const CheckInfo& info, const Instance& instance,
                       std::optional<double> q, std::optional<double> alpha,
                       double tol_scale, bool enforce_hypothesis = true);

double default_tol_scale(const CheckInfo& info);

// Runs every (check, dim, trial) cell of the config. Rows are emitted in
// (check, dim, index, variant) order regardless of the worker count, so
// reports are byte-reproducible.
SuiteReport run_suite(const SuiteConfig& cfg);

nlohmann::ordered_json row_to_json(const Row& row);
std::string report_to_jsonl(const SuiteReport& report);
std::string report_to_csv(const SuiteReport& report);

// Re-derives the instance named by a report row and re-evaluates its check.
Verdict replay_row(const nlohmann::json& row);

// 2 when any row is a genuine violation (holds false with hypothesis_ok
// true), else 0.
int suite_exit_code(const SuiteReport& report);

// Gap-minimization (tightness) search: random restarts plus coordinate-wise
// Gaussian perturbation of the generator's latent factors, accepting steps
// that lower the gap while the instance stays in its hypothesis class.
struct SearchConfig {
  std::string check;
  std::vector<std::pair<int, int>> dims;
  long budget = 1000;
  std::uint64_t seed = 0;
  double q = 1.0;
  std::optional<double> alpha;
  bool explore = false;  // evaluate det_ppt on plain PSD draws, hypothesis gate off
};

struct TightnessRecord {
  std::string check;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  int restart = 0;  // which restart produced the best instance
  double best_gap = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  long accepted_steps = 0;
  std::vector<double> trace;  // best-so-far gap after each evaluation
  Instance best_instance{BlockMatrix(1, 1, ComplexMatrix::identity(1))};
  bool explore = false;
  double q = 1.0;
  std::optional<double> alpha;
};

TightnessRecord minimize_gap(const SearchConfig& cfg);

// Re-evaluates the stored best instance; equals best_gap within 1e-12.
double re_evaluate(const TightnessRecord& record);

int cli_main(int argc, const char* const* argv);

}  // namespace blocktrace
