// clsat: instance generation, guided solving, proof checking, and benchmarks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "clsat/bench.hpp"
#include "clsat/formula.hpp"
#include "clsat/gtn.hpp"
#include "clsat/pebbling.hpp"
#include "clsat/proof_bridge.hpp"
#include "clsat/resolution.hpp"
#include "clsat/seqgen.hpp"
#include "clsat/sequence.hpp"
#include "clsat/solver.hpp"

using namespace clsat;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitBudget = 30;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot read " + path);
  return in;
}

// Writes to `path`, or stdout if it is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw CliError("cannot write " + path);
  fn(out);
}

CnfFormula read_cnf(const std::string& path) {
  auto in = open_in(path);
  return parse_dimacs(in);
}

ResolutionProof read_proof(const std::string& path) {
  auto in = open_in(path);
  return parse_proof(in);
}

// "a..b" or "a,b,c" or "a".
std::vector<std::uint32_t> parse_range(const std::string& s) {
  std::vector<std::uint32_t> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = std::stoul(s.substr(0, dots));
    const auto hi = std::stoul(s.substr(dots + 2));
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint32_t>(v));
    return out;
  }
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) out.push_back(tok);
  return out;
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::kSat: return kExitSat;
    case Outcome::kUnsat: return kExitUnsat;
    case Outcome::kBudgetExceeded: return kExitBudget;
  }
  return 1;
}

void print_stats(std::ostream& out, const SolveStats& s) {
  out << "decisions " << s.decisions << '\n'
      << "propagations " << s.propagations << '\n'
      << "conflicts " << s.conflicts << '\n'
      << "learned " << s.learned_clauses << '\n'
      << "max_level " << s.max_level << '\n'
      << "fallback " << s.fallback_decisions << '\n'
      << "restarts " << s.restarts << '\n';
}

LearningScheme scheme_from(const std::string& name) {
  auto s = parse_learning_scheme(name);
  if (!s) throw CliError("unknown learning scheme '" + name + "'");
  return *s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clause learning with structure-derived branching sequences"};
  app.require_subcommand(1);

  // gen-grid
  std::uint32_t layers = 0;
  bool sat_variant = false;
  std::uint64_t seed = 1;
  std::string out_path, graph_path;
  auto* gen_grid_cmd = app.add_subcommand("gen-grid", "grid pebbling formula");
  gen_grid_cmd->add_option("--layers", layers, "number of layers")->required();
  gen_grid_cmd->add_flag("--sat", sat_variant, "delete one seeded clause");
  gen_grid_cmd->add_option("--seed", seed, "seed for --sat");
  gen_grid_cmd->add_option("-o,--output", out_path, "DIMACS output");
  gen_grid_cmd->add_option("--graph", graph_path, "also write the graph");

  // gen-randpeb
  std::uint32_t nodes = 0, max_indegree = 5, max_label = 6;
  auto* gen_rp_cmd =
      app.add_subcommand("gen-randpeb", "randomized pebbling formula");
  gen_rp_cmd->add_option("--nodes", nodes, "nodes before capping")->required();
  gen_rp_cmd->add_option("--max-indegree", max_indegree, "indegree bound");
  gen_rp_cmd->add_option("--max-label", max_label, "label size bound");
  gen_rp_cmd->add_option("--seed", seed, "generator seed");
  gen_rp_cmd->add_flag("--sat", sat_variant, "delete one seeded clause");
  gen_rp_cmd->add_option("-o,--output", out_path, "DIMACS output");
  gen_rp_cmd->add_option("--graph", graph_path, "also write the graph");

  // gen-gtn
  std::uint32_t gtn_n = 0;
  auto* gen_gtn_cmd = app.add_subcommand("gen-gtn", "GT_n ordering formula");
  gen_gtn_cmd->add_option("--n", gtn_n, "number of elements")->required();
  gen_gtn_cmd->add_flag("--sat", sat_variant,
                        "delete one seeded successor clause");
  gen_gtn_cmd->add_option("--seed", seed, "seed for --sat");
  gen_gtn_cmd->add_option("-o,--output", out_path, "DIMACS output");

  // gen-seq
  std::string algorithm = "auto";
  auto* gen_seq_cmd = app.add_subcommand("gen-seq", "branching sequence");
  auto* seq_graph_opt =
      gen_seq_cmd->add_option("--graph", graph_path, "pebbling graph file");
  auto* seq_gtn_opt = gen_seq_cmd->add_option("--gtn", gtn_n, "GT_n size");
  seq_graph_opt->excludes(seq_gtn_opt);
  gen_seq_cmd->add_option("--algorithm", algorithm,
                          "auto, general, or grid (pebbling only)")
      ->check(CLI::IsMember({"auto", "general", "grid"}));
  gen_seq_cmd->add_option("-o,--output", out_path, "sequence output");

  // solve
  std::string cnf_path, seq_path, proof_path, learning = "first_uip",
                                               edges_path;
  bool cl_mm = false, no_restarts = false, print_model = false,
       validate_trail = false;
  std::optional<std::uint64_t> conflicts, decisions;
  auto* solve_cmd = app.add_subcommand("solve", "solve a DIMACS formula");
  solve_cmd->add_option("cnf", cnf_path, "DIMACS input")->required();
  solve_cmd->add_option("--seq", seq_path, "branching sequence file");
  solve_cmd->add_option("--learning", learning,
                        "none, decision, relsat, first_uip, first_new_cut");
  solve_cmd->add_flag("--cl-minus-minus", cl_mm,
                      "allow branching on assigned variables");
  solve_cmd->add_flag("--no-restarts", no_restarts,
                      "ignore restart markers in the sequence");
  solve_cmd->add_option("--conflicts", conflicts, "conflict budget");
  solve_cmd->add_option("--decisions", decisions, "decision budget");
  solve_cmd->add_option("--proof", proof_path,
                        "write the resolution refutation on UNSAT");
  solve_cmd->add_option("--graph-edges", edges_path,
                        "write every conflict graph as an edge list");
  solve_cmd->add_flag("--model", print_model, "print the model on SAT");
  solve_cmd->add_flag("--validate-trail", validate_trail,
                      "check trail invariants after every propagation");

  // verify-proof
  bool trivial = false;
  auto* verify_cmd =
      app.add_subcommand("verify-proof", "check a resolution refutation");
  verify_cmd->add_option("cnf", cnf_path, "DIMACS input")->required();
  verify_cmd->add_option("proof", proof_path, "proof file")->required();
  verify_cmd->add_flag("--trivial", trivial,
                       "check a trivial derivation instead");

  // pt-extend
  bool no_normalize = false;
  auto* pt_cmd = app.add_subcommand("pt-extend", "proof trace extension");
  pt_cmd->add_option("cnf", cnf_path, "DIMACS input")->required();
  pt_cmd->add_option("proof", proof_path, "refutation file")->required();
  pt_cmd->add_option("-o,--output", out_path, "extended DIMACS output");
  pt_cmd->add_option("--seq", seq_path, "trace sequence output");
  pt_cmd->add_flag("--no-normalize", no_normalize,
                   "use the proof as given");

  // res-replay
  auto* replay_cmd = app.add_subcommand(
      "res-replay", "replay a refutation as a restart-marked sequence");
  replay_cmd->add_option("cnf", cnf_path, "DIMACS input")->required();
  replay_cmd->add_option("proof", proof_path, "refutation file")->required();
  replay_cmd->add_option("--learning", learning, "learning scheme");
  replay_cmd->add_option("--seq", seq_path, "also write the sequence");
  replay_cmd->add_flag("--no-normalize", no_normalize,
                       "use the proof as given");

  // bench
  std::string family = "grid", range, seeds = "1", variants = "unsat",
              configs = "dpll,cl_default,cl_sequence", csv_path, md_path;
  std::uint64_t budget_conflicts = Budget{}.conflicts;
  std::uint64_t budget_decisions = Budget{}.decisions;
  unsigned jobs = 1;
  auto* bench_cmd = app.add_subcommand(
      "bench", std::string("run configurations over a family; CSV columns: ") +
                   kBenchCsvHeader);
  bench_cmd->add_option("--family", family, "grid, random_pebbling, gtn")
      ->check(CLI::IsMember({"grid", "random_pebbling", "randpeb", "gtn"}));
  bench_cmd->add_option("--layers,--n,--nodes", range,
                        "size range: a..b or a,b,c")
      ->required();
  bench_cmd->add_option("--seeds", seeds, "random_pebbling seeds / sat seeds");
  bench_cmd->add_option("--max-indegree", max_indegree, "random_pebbling");
  bench_cmd->add_option("--max-label", max_label, "random_pebbling");
  bench_cmd->add_option("--variants", variants, "unsat,sat");
  bench_cmd->add_option("--configs", configs,
                        "dpll,cl_default,cl_sequence");
  bench_cmd->add_option("--conflicts", budget_conflicts, "conflict budget");
  bench_cmd->add_option("--decisions", budget_decisions, "decision budget");
  bench_cmd->add_option("--jobs", jobs, "worker threads");
  bench_cmd->add_option("--csv", csv_path, "CSV output (default stdout)");
  bench_cmd->add_option("--markdown", md_path, "markdown table output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*gen_grid_cmd || *gen_rp_cmd) {
      const PebblingGraph g =
          *gen_grid_cmd
              ? gen_grid(layers)
              : gen_random_pebbling(nodes, max_indegree, max_label, seed);
      CnfFormula f = pebbling_to_cnf(g);
      if (sat_variant) f = make_satisfiable(f, seed);
      emit(out_path, [&](std::ostream& o) { write_dimacs(o, f); });
      if (!graph_path.empty())
        emit(graph_path, [&](std::ostream& o) { write_pebbling(o, g); });
      return 0;
    }
    if (*gen_gtn_cmd) {
      const CnfFormula f = sat_variant ? gen_gtn_sat(gtn_n, seed) : gen_gtn(gtn_n);
      emit(out_path, [&](std::ostream& o) { write_dimacs(o, f); });
      return 0;
    }
    if (*gen_seq_cmd) {
      BranchingSequence seq;
      if (*seq_gtn_opt) {
        seq = gtn_seq(gtn_n);
      } else if (*seq_graph_opt) {
        auto in = open_in(graph_path);
        const PebblingGraph g = parse_pebbling(in);
        const bool grid =
            algorithm == "grid" || (algorithm == "auto" && is_grid(g));
        seq = grid ? grid_peb_seq_1uip(g) : peb_seq_1uip(g);
      } else {
        throw CliError("gen-seq needs --graph or --gtn");
      }
      emit(out_path, [&](std::ostream& o) { write_sequence(o, seq); });
      return 0;
    }
    if (*solve_cmd) {
      const CnfFormula f = read_cnf(cnf_path);
      SolverConfig cfg;
      cfg.learning = scheme_from(learning);
      cfg.cl_minus_minus = cl_mm;
      if (no_restarts) cfg.restart_policy = RestartPolicy::kOff;
      cfg.conflict_budget = conflicts;
      cfg.decision_budget = decisions;
      cfg.log_proof = !proof_path.empty();
      cfg.validate_trail = validate_trail;
      if (!seq_path.empty()) {
        auto in = open_in(seq_path);
        cfg.sequence = parse_sequence(in);
      }
      std::ofstream edges;
      if (!edges_path.empty()) {
        edges.open(edges_path);
        if (!edges) throw CliError("cannot write " + edges_path);
        cfg.on_conflict = [&edges, k = 0](const ConflictGraph& g,
                                          const Cut& cut) mutable {
          edges << "# conflict " << ++k << " learned "
                << cut_to_clause(g, cut).to_string() << '\n'
                << g.to_edge_list();
        };
      }
      validate_config(cfg, f.num_vars());
      const SolveResult r = solve(f, cfg);
      std::cout << to_string(r.outcome) << '\n';
      print_stats(std::cout, r.stats);
      if (r.outcome == Outcome::kSat && print_model) {
        std::cout << 'v';
        for (std::uint32_t v = 1; v <= f.num_vars(); ++v)
          std::cout << ' '
                    << (r.model.value(Var(v)) == Value::kTrue
                            ? static_cast<long long>(v)
                            : -static_cast<long long>(v));
        std::cout << " 0\n";
      }
      if (r.outcome == Outcome::kUnsat && !proof_path.empty()) {
        if (!r.proof.complete)
          throw CliError("run ended without a level-0 refutation record");
        const ResolutionProof p = cl_to_res(r.proof, f);
        emit(proof_path, [&](std::ostream& o) { write_proof(o, p); });
      }
      return exit_code(r.outcome);
    }
    if (*verify_cmd) {
      const CnfFormula f = read_cnf(cnf_path);
      const ResolutionProof p = read_proof(proof_path);
      const CheckResult r =
          trivial ? check_trivial(p) : check_res_refutation(p, f);
      if (trivial && r) {
        // A trivial derivation must also use clauses of the formula only.
        const std::unordered_set<Clause> in_f(f.clauses().begin(),
                                              f.clauses().end());
        auto d = check_derivation(
            p, [&](const Clause& c) { return in_f.contains(c); });
        if (!d) {
          std::cout << "INVALID step " << d.step << ": " << d.reason << '\n';
          return 1;
        }
      }
      if (!r) {
        std::cout << "INVALID step " << r.step << ": " << r.reason << '\n';
        return 1;
      }
      std::cout << "VALID " << p.size() << " steps, " << p.resolvent_count()
                << " resolvents\n";
      return 0;
    }
    if (*pt_cmd) {
      const CnfFormula f = read_cnf(cnf_path);
      ResolutionProof p = read_proof(proof_path);
      if (!no_normalize) p = normalize_refutation(p, f);
      const ProofTraceExtension pt = proof_trace_extension(f, p);
      emit(out_path, [&](std::ostream& o) { write_dimacs(o, pt.formula); });
      if (!seq_path.empty())
        emit(seq_path, [&](std::ostream& o) { write_sequence(o, pt.sequence); });
      std::cerr << "traced " << pt.traced.size() << " clauses\n";
      return 0;
    }
    if (*replay_cmd) {
      const CnfFormula f = read_cnf(cnf_path);
      ResolutionProof p = read_proof(proof_path);
      if (!no_normalize) p = normalize_refutation(p, f);
      if (!seq_path.empty())
        emit(seq_path, [&](std::ostream& o) {
          write_sequence(o, res_to_clmm_sequence(p, f));
        });
      const ReplayReport rep = replay_clmm(f, p, scheme_from(learning));
      std::cout << to_string(rep.result.outcome) << '\n';
      print_stats(std::cout, rep.result.stats);
      std::cout << "expected " << rep.expected.size() << '\n'
                << "learned " << rep.learned.size() << '\n'
                << "matched " << rep.matched << '\n';
      if (!rep.faithful()) {
        std::cerr << "replay diverged from the refutation";
        if (rep.matched < rep.expected.size())
          std::cerr << " at clause " << rep.matched + 1 << ": expected "
                    << rep.expected[rep.matched].to_string() << ", learned "
                    << (rep.matched < rep.learned.size()
                            ? rep.learned[rep.matched].to_string()
                            : std::string("nothing"));
        std::cerr << '\n';
        return 1;
      }
      return exit_code(rep.result.outcome);
    }
    if (*bench_cmd) {
      const BenchFamily fam = *parse_bench_family(family);
      std::vector<BenchVariant> vs;
      for (const auto& v : split(variants)) {
        if (v == "unsat") vs.push_back(BenchVariant::kUnsat);
        else if (v == "sat") vs.push_back(BenchVariant::kSat);
        else throw CliError("unknown variant '" + v + "'");
      }
      std::vector<BenchConfig> cs;
      for (const auto& c : split(configs)) {
        auto parsed = parse_bench_config(c);
        if (!parsed) throw CliError("unknown config '" + c + "'");
        cs.push_back(*parsed);
      }
      const auto sizes = parse_range(range);
      const auto seed_list = parse_range(seeds);
      std::vector<BenchInstance> instances;
      for (std::uint32_t size : sizes)
        for (std::uint32_t s : seed_list)
          for (BenchVariant v : vs) {
            switch (fam) {
              case BenchFamily::kGrid:
                instances.push_back(grid_instance(size, v, s));
                break;
              case BenchFamily::kRandomPebbling:
                instances.push_back(random_pebbling_instance(
                    size, max_indegree, max_label, s, v));
                break;
              case BenchFamily::kGtn:
                instances.push_back(gtn_instance(size, v, s));
                break;
            }
          }
      const auto rows = run_bench(
          instances, cs, Budget{budget_conflicts, budget_decisions}, jobs);
      emit(csv_path, [&](std::ostream& o) { write_csv(o, rows); });
      if (!md_path.empty())
        emit(md_path, [&](std::ostream& o) { write_markdown(o, rows); });
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
