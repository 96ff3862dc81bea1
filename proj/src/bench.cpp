#include "clsat/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <thread>

#include "clsat/gtn.hpp"
#include "clsat/pebbling.hpp"
#include "clsat/seqgen.hpp"

namespace clsat {

std::string to_string(BenchFamily f) {
  switch (f) {
    case BenchFamily::kGrid: return "grid";
    case BenchFamily::kRandomPebbling: return "random_pebbling";
    case BenchFamily::kGtn: return "gtn";
  }
  return "?";
}

std::string to_string(BenchVariant v) {
  return v == BenchVariant::kSat ? "sat" : "unsat";
}

std::string to_string(BenchConfig c) {
  switch (c) {
    case BenchConfig::kDpll: return "dpll";
    case BenchConfig::kClDefault: return "cl_default";
    case BenchConfig::kClSequence: return "cl_sequence";
  }
  return "?";
}

std::optional<BenchFamily> parse_bench_family(std::string_view s) {
  if (s == "grid") return BenchFamily::kGrid;
  if (s == "random_pebbling" || s == "randpeb")
    return BenchFamily::kRandomPebbling;
  if (s == "gtn") return BenchFamily::kGtn;
  return std::nullopt;
}

std::optional<BenchConfig> parse_bench_config(std::string_view s) {
  if (s == "dpll") return BenchConfig::kDpll;
  if (s == "cl_default") return BenchConfig::kClDefault;
  if (s == "cl_sequence") return BenchConfig::kClSequence;
  return std::nullopt;
}

namespace {

BenchInstance pebbling_instance(const PebblingGraph& g, BranchingSequence seq,
                                BenchFamily family, std::string params,
                                BenchVariant variant, std::uint64_t seed) {
  BenchInstance inst;
  inst.family = family;
  inst.params = std::move(params);
  inst.variant = variant;
  inst.formula = pebbling_to_cnf(g);
  if (variant == BenchVariant::kSat)
    inst.formula = make_satisfiable(inst.formula, seed);
  inst.sequence = std::move(seq);
  return inst;
}

}  // namespace

BenchInstance grid_instance(std::uint32_t layers, BenchVariant variant,
                            std::uint64_t seed) {
  const PebblingGraph g = gen_grid(layers);
  return pebbling_instance(g, grid_peb_seq_1uip(g), BenchFamily::kGrid,
                           "layers=" + std::to_string(layers), variant, seed);
}

BenchInstance random_pebbling_instance(std::uint32_t nodes,
                                       std::uint32_t max_indegree,
                                       std::uint32_t max_label,
                                       std::uint64_t seed,
                                       BenchVariant variant) {
  const PebblingGraph g =
      gen_random_pebbling(nodes, max_indegree, max_label, seed);
  std::string params = "nodes=" + std::to_string(nodes) +
                       " d=" + std::to_string(max_indegree) +
                       " l=" + std::to_string(max_label) +
                       " seed=" + std::to_string(seed);
  return pebbling_instance(g, peb_seq_1uip(g), BenchFamily::kRandomPebbling,
                           std::move(params), variant, seed);
}

BenchInstance gtn_instance(std::uint32_t n, BenchVariant variant,
                           std::uint64_t seed) {
  BenchInstance inst;
  inst.family = BenchFamily::kGtn;
  inst.params = "n=" + std::to_string(n);
  inst.variant = variant;
  inst.formula =
      variant == BenchVariant::kSat ? gen_gtn_sat(n, seed) : gen_gtn(n);
  inst.sequence = gtn_seq(n);
  return inst;
}

SolverConfig make_config(BenchConfig c, const BranchingSequence& sequence,
                         const Budget& budget) {
  SolverConfig cfg;
  cfg.log_proof = false;
  cfg.conflict_budget = budget.conflicts;
  cfg.decision_budget = budget.decisions;
  switch (c) {
    case BenchConfig::kDpll:
      cfg.learning = LearningScheme::kNone;
      break;
    case BenchConfig::kClDefault:
      cfg.learning = LearningScheme::kFirstUip;
      break;
    case BenchConfig::kClSequence:
      cfg.learning = LearningScheme::kFirstUip;
      cfg.sequence = sequence;
      break;
  }
  return cfg;
}

BenchRow run_one(const BenchInstance& inst, BenchConfig config,
                 const Budget& budget) {
  const SolverConfig cfg = make_config(config, inst.sequence, budget);
  const auto start = std::chrono::steady_clock::now();
  SolveResult r = solve(inst.formula, cfg);
  const auto stop = std::chrono::steady_clock::now();
  BenchRow row;
  row.family = inst.family;
  row.params = inst.params;
  row.variant = inst.variant;
  row.config = config;
  row.outcome = r.outcome;
  row.stats = r.stats;
  row.time_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& instances,
                                const std::vector<BenchConfig>& configs,
                                const Budget& budget, unsigned jobs) {
  const std::size_t total = instances.size() * configs.size();
  std::vector<BenchRow> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < total;)
      rows[k] = run_one(instances[k / configs.size()],
                        configs[k % configs.size()], budget);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  if (jobs == 1) {
    worker();
    return rows;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  pool.clear();
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << to_string(r.family) << ',' << r.params << ','
        << to_string(r.variant) << ',' << to_string(r.config) << ','
        << to_string(r.outcome) << ',' << r.stats.decisions << ','
        << r.stats.conflicts << ',' << r.stats.learned_clauses << ','
        << r.stats.fallback_decisions << ',' << r.stats.restarts << ','
        << std::fixed << std::setprecision(3) << r.time_ms << '\n';
  }
}

void write_markdown(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "| family | params | variant | config | outcome | decisions | "
         "conflicts | learned | fallback | restarts | time (ms) |\n"
      << "|---|---|---|---|---|--:|--:|--:|--:|--:|--:|\n";
  for (const BenchRow& r : rows) {
    out << "| " << to_string(r.family) << " | " << r.params << " | "
        << to_string(r.variant) << " | " << to_string(r.config) << " | "
        << to_string(r.outcome) << " | " << r.stats.decisions << " | "
        << r.stats.conflicts << " | " << r.stats.learned_clauses << " | "
        << r.stats.fallback_decisions << " | " << r.stats.restarts << " | "
        << std::fixed << std::setprecision(1) << r.time_ms << " |\n";
  }
}

}  // namespace clsat
