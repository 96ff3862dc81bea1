#pragma once

// Benchmark harness: instance families, the three solver configurations
// compared in the result tables, and CSV / markdown output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clsat/formula.hpp"
#include "clsat/sequence.hpp"
#include "clsat/solver.hpp"

namespace clsat {

enum class BenchFamily : std::uint8_t { kGrid, kRandomPebbling, kGtn };
enum class BenchVariant : std::uint8_t { kUnsat, kSat };
enum class BenchConfig : std::uint8_t { kDpll, kClDefault, kClSequence };

std::string to_string(BenchFamily f);
std::string to_string(BenchVariant v);
std::string to_string(BenchConfig c);
std::optional<BenchFamily> parse_bench_family(std::string_view s);
std::optional<BenchConfig> parse_bench_config(std::string_view s);

struct Budget {
  std::uint64_t conflicts = 1'000'000;
  std::uint64_t decisions = 10'000'000;
};

struct BenchInstance {
  BenchFamily family = BenchFamily::kGrid;
  std::string params;
  BenchVariant variant = BenchVariant::kUnsat;
  CnfFormula formula;
  /// Generated from the structure; used by the cl_sequence configuration.
  BranchingSequence sequence;
};

/// Satisfiable variants delete one seeded clause (any clause for pebbling,
/// a successor clause for GT_n); the sequence is the one generated for the
/// unsatisfiable formula.
BenchInstance grid_instance(std::uint32_t layers, BenchVariant variant,
                            std::uint64_t seed = 1);
BenchInstance random_pebbling_instance(std::uint32_t nodes,
                                       std::uint32_t max_indegree,
                                       std::uint32_t max_label,
                                       std::uint64_t seed,
                                       BenchVariant variant);
BenchInstance gtn_instance(std::uint32_t n, BenchVariant variant,
                           std::uint64_t seed = 1);

/// dpll: no learning, activity heuristic. cl_default: 1UIP, activity
/// heuristic. cl_sequence: 1UIP guided by `sequence`. Proof logging off.
SolverConfig make_config(BenchConfig c, const BranchingSequence& sequence,
                         const Budget& budget);

struct BenchRow {
  BenchFamily family = BenchFamily::kGrid;
  std::string params;
  BenchVariant variant = BenchVariant::kUnsat;
  BenchConfig config = BenchConfig::kDpll;
  Outcome outcome = Outcome::kBudgetExceeded;
  SolveStats stats;
  double time_ms = 0;
};

BenchRow run_one(const BenchInstance& inst, BenchConfig config,
                 const Budget& budget);

/// One row per (instance, config), ordered by instance then config
/// regardless of `jobs` (worker threads, at least 1).
std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& instances,
                                const std::vector<BenchConfig>& configs,
                                const Budget& budget, unsigned jobs = 1);

inline constexpr const char* kBenchCsvHeader =
    "family,params,variant,config,outcome,decisions,conflicts,learned,"
    "fallback,restarts,time_ms";

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void write_markdown(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace clsat
