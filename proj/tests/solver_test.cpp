#include <gtest/gtest.h>

#include <random>

#include "clsat/gtn.hpp"
#include "clsat/pebbling.hpp"
#include "clsat/proof_bridge.hpp"
#include "clsat/seqgen.hpp"
#include "clsat/solver.hpp"
#include "oracles.hpp"

using namespace clsat;

namespace {

Lit L(int d) { return Lit::from_dimacs(d); }

constexpr LearningScheme kAllSchemes[] = {
    LearningScheme::kNone, LearningScheme::kDecision, LearningScheme::kRelSat,
    LearningScheme::kFirstUip, LearningScheme::kFirstNewCut};

SolverConfig with(LearningScheme s, std::optional<BranchingSequence> seq = {}) {
  SolverConfig cfg;
  cfg.learning = s;
  cfg.sequence = std::move(seq);
  return cfg;
}

std::vector<bool> to_bits(const PartialAssignment& a, std::uint32_t n) {
  std::vector<bool> bits(n + 1);
  for (std::uint32_t v = 1; v <= n; ++v)
    bits[v] = a.value(Var(v)) == Value::kTrue;
  return bits;
}

bool model_is_total(const PartialAssignment& a, std::uint32_t n) {
  for (std::uint32_t v = 1; v <= n; ++v)
    if (a.value(Var(v)) == Value::kUnassigned) return false;
  return true;
}

std::vector<Clause> learned_clauses(const SolveResult& r) {
  std::vector<Clause> out;
  for (const LearnedClauseRecord& rec : r.proof.records)
    if (!rec.redundant && !rec.reason_only) out.push_back(rec.clause);
  return out;
}

}  // namespace

TEST(Solve, ComplementaryUnitsNeedNoDecisions) {
  const CnfFormula f(1, {Clause{L(1)}, Clause{L(-1)}});
  for (LearningScheme s : kAllSchemes) {
    const SolveResult r = solve(f, with(s));
    EXPECT_EQ(r.outcome, Outcome::kUnsat) << to_string(s);
    EXPECT_EQ(r.stats.decisions, 0u);
  }
  SolverConfig clmm = with(LearningScheme::kFirstUip, BranchingSequence({L(1)}));
  clmm.cl_minus_minus = true;
  EXPECT_EQ(solve(f, clmm).stats.decisions, 0u);
}

TEST(Solve, TwoLayerGridWithSequenceX1) {
  const CnfFormula f = pebbling_to_cnf(gen_grid(2));
  const SolveResult r =
      solve(f, with(LearningScheme::kFirstUip, BranchingSequence({L(1)})));
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  EXPECT_EQ(r.stats.decisions, 1u);
  EXPECT_EQ(r.stats.fallback_decisions, 0u);
  const auto learned = learned_clauses(r);
  ASSERT_FALSE(learned.empty());
  EXPECT_EQ(learned.front(), (Clause{L(-2)}));
  EXPECT_TRUE(r.proof.complete);
  EXPECT_TRUE(r.proof.records.back().clause.empty());
}

TEST(Solve, FiveLayerGridSequenceIsComplete) {
  const PebblingGraph g = gen_grid(5);
  const CnfFormula f = pebbling_to_cnf(g);
  EXPECT_EQ(f.num_vars(), 30u);
  const BranchingSequence seq = grid_peb_seq_1uip(g);
  const SolveResult r = solve(f, with(LearningScheme::kFirstUip, seq));
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  EXPECT_EQ(r.stats.fallback_decisions, 0u);
  EXPECT_LE(r.stats.decisions, seq.size());
}

// The graph from the conflict tests: with d1, d2, d3, a1
// branched FALSE, 1UIP learns (d1|d2|d3|~a2) and then (d1|d2|d3).
TEST(Solve, CappedSubgraphLearnsTwoClauses) {
  PebblingGraph g;
  const NodeIndex a = g.add_node({Var(1), Var(2)}, {});
  const NodeIndex b = g.add_node({Var(3), Var(4)}, {});
  const NodeIndex d = g.add_node({Var(5), Var(6), Var(7)}, {a, b});
  const NodeIndex c = g.add_node({Var(8)}, {a, b});
  g.add_target(g.add_node({Var(9), Var(10)}, {c, d}));
  std::vector<int> levels_seen;
  SolverConfig cfg =
      with(LearningScheme::kFirstUip, BranchingSequence({L(5), L(6), L(7), L(1)}));
  cfg.on_conflict = [&](const ConflictGraph& cg, const Cut&) {
    levels_seen.push_back(cg.conflict_level());
  };
  const SolveResult r = solve(pebbling_to_cnf(g), cfg);
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  const auto learned = learned_clauses(r);
  ASSERT_GE(learned.size(), 2u);
  EXPECT_EQ(learned[0], (Clause{L(5), L(6), L(7), L(-2)}));
  EXPECT_EQ(learned[1], (Clause{L(5), L(6), L(7)}));
  // The first clause asserts at level 3, where the second conflict occurs.
  ASSERT_GE(levels_seen.size(), 2u);
  EXPECT_EQ(levels_seen[0], 4);
  EXPECT_EQ(levels_seen[1], 3);
}

TEST(Solve, SkipsAssignedSequenceVariables) {
  const CnfFormula f(3, {Clause{L(1)}, Clause{L(2), L(3)}, Clause{L(2), L(-3)}});
  const SolveResult r = solve(
      f, with(LearningScheme::kFirstUip, BranchingSequence({L(1), L(2)})));
  EXPECT_EQ(r.outcome, Outcome::kSat);
  const auto learned = learned_clauses(r);
  ASSERT_FALSE(learned.empty());
  EXPECT_EQ(learned.front(), (Clause{L(2)}));
  // x3 stays open, but every clause is satisfied once the sequence runs out.
  EXPECT_EQ(r.stats.decisions, 1u);
  EXPECT_EQ(r.stats.fallback_decisions, 0u);
  EXPECT_TRUE(model_is_total(r.model, 3));
  EXPECT_TRUE(oracle::satisfies(f, to_bits(r.model, 3)));
}

TEST(Solve, EmptySequenceFallsBack) {
  const CnfFormula f(2, {Clause{L(1), L(2)}});
  const SolveResult r = solve(f, with(LearningScheme::kFirstUip, BranchingSequence()));
  EXPECT_EQ(r.outcome, Outcome::kSat);
  EXPECT_GE(r.stats.fallback_decisions, 1u);
  EXPECT_EQ(r.stats.fallback_decisions, r.stats.decisions);
}

TEST(Solve, RelaxedBranchOnImpliedLiteralConflicts) {
  // Deciding ~x1 implies x2; CL-- then branches ~x2 anyway.
  const CnfFormula f(3, {Clause{L(1), L(2)}, Clause{L(-2), L(3)}});
  std::vector<ConflictGraph> graphs;
  SolverConfig cfg =
      with(LearningScheme::kFirstUip, BranchingSequence({L(1), L(2)}));
  cfg.cl_minus_minus = true;
  cfg.on_conflict = [&](const ConflictGraph& g, const Cut&) {
    graphs.push_back(g);
  };
  const SolveResult r = solve(f, cfg);
  EXPECT_EQ(r.outcome, Outcome::kSat);
  ASSERT_FALSE(graphs.empty());
  const ConflictGraph& g = graphs.front();
  EXPECT_EQ(g.conflict_variable(), Var(2));
  ASSERT_TRUE(g.find(L(-2)) && g.find(L(2)));
  EXPECT_TRUE(g.node(*g.find(L(-2))).decision);
  EXPECT_FALSE(g.node(*g.find(L(2))).decision);
  EXPECT_TRUE(oracle::satisfies(f, to_bits(r.model, 3)));

  // Standard CL skips the implied variable instead.
  cfg.cl_minus_minus = false;
  graphs.clear();
  EXPECT_EQ(solve(f, cfg).outcome, Outcome::kSat);
  for (const ConflictGraph& h : graphs)
    EXPECT_FALSE(h.find(L(-2)) && h.node(*h.find(L(-2))).decision);
}

TEST(Solve, RestartsKeepLearnedClauses) {
  const CnfFormula f(4, {Clause{L(1), L(2), L(3)}, Clause{L(1), L(2), L(-3)},
                         Clause{L(3), L(4)}});
  BranchingSequence seq({L(1), L(2)});
  seq.push_restart();
  seq.push(L(1));
  SolverConfig cfg = with(LearningScheme::kFirstUip, seq);
  cfg.cl_minus_minus = true;
  const SolveResult r = solve(f, cfg);
  EXPECT_EQ(r.outcome, Outcome::kSat);
  EXPECT_EQ(r.stats.restarts, 1u);
  // Without (x1|x2) retained, the fallback's ~x2 would conflict again.
  EXPECT_EQ(r.stats.conflicts, 1u);
  EXPECT_TRUE(oracle::satisfies(f, to_bits(r.model, 4)));
}

TEST(Solve, ConsecutiveRestartMarkersAtLevelZero) {
  BranchingSequence seq;
  seq.push_restart();
  seq.push_restart();
  SolverConfig cfg = with(LearningScheme::kFirstUip, seq);
  cfg.cl_minus_minus = true;
  const SolveResult r = solve(gen_gtn(3), cfg);
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  EXPECT_EQ(r.stats.restarts, 2u);
}

TEST(Solve, RestartMarkersIgnoredWhenPolicyOff) {
  BranchingSequence seq;
  seq.push_restart();
  SolverConfig cfg = with(LearningScheme::kFirstUip, seq);
  cfg.cl_minus_minus = true;
  cfg.restart_policy = RestartPolicy::kOff;
  EXPECT_EQ(solve(gen_gtn(3), cfg).stats.restarts, 0u);
}

TEST(Config, RejectsInconsistentSettings) {
  SolverConfig clmm_none = with(LearningScheme::kNone);
  clmm_none.cl_minus_minus = true;
  EXPECT_THROW(validate_config(clmm_none, 3), std::invalid_argument);
  BranchingSequence marked;
  marked.push_restart();
  EXPECT_THROW(validate_config(with(LearningScheme::kNone, marked), 3),
               std::invalid_argument);
  EXPECT_THROW(
      validate_config(with(LearningScheme::kFirstUip, BranchingSequence({L(4)})), 3),
      std::invalid_argument);
  EXPECT_NO_THROW(validate_config(with(LearningScheme::kFirstUip), 3));
}

TEST(Budget, StopsAtConflictAndDecisionLimits) {
  const CnfFormula f = gen_gtn(8);
  SolverConfig cfg = with(LearningScheme::kNone);
  cfg.conflict_budget = 5;
  SolveResult r = solve(f, cfg);
  EXPECT_EQ(r.outcome, Outcome::kBudgetExceeded);
  EXPECT_EQ(r.stats.conflicts, 5u);

  cfg.conflict_budget.reset();
  cfg.decision_budget = 7;
  r = solve(f, cfg);
  EXPECT_EQ(r.outcome, Outcome::kBudgetExceeded);
  EXPECT_EQ(r.stats.decisions, 7u);
}

// Outcomes against brute force for every scheme, with models checked and
// refutations converted to verified resolution proofs.
TEST(Solve, AgreesWithBruteForce) {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 150; ++round) {
    const std::uint32_t n = 4 + rng() % 11;
    const std::uint32_t m = n * 4 + rng() % (n + 1);
    const CnfFormula f = oracle::random_cnf(n, m, 3, 1000 + round);
    const bool sat = oracle::brute_force_model(f).has_value();
    for (LearningScheme s : kAllSchemes) {
      SolverConfig cfg = with(s);
      cfg.validate_trail = true;
      const SolveResult r = solve(f, cfg);
      ASSERT_EQ(r.outcome, sat ? Outcome::kSat : Outcome::kUnsat)
          << to_string(s) << " round " << round;
      EXPECT_LE(r.stats.fallback_decisions, r.stats.decisions);
      if (sat) {
        EXPECT_TRUE(model_is_total(r.model, n));
        EXPECT_TRUE(oracle::satisfies(f, to_bits(r.model, n)));
      } else if (s != LearningScheme::kNone) {
        ASSERT_TRUE(r.proof.complete) << to_string(s) << " round " << round;
        const ResolutionProof p = cl_to_res(r.proof, f);
        const CheckResult check = check_res_refutation(p, f);
        EXPECT_TRUE(check) << to_string(s) << ": " << check.reason;
      }
    }
  }
}

TEST(Solve, SequencesDoNotChangeOutcome) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 60; ++round) {
    const std::uint32_t n = 6 + rng() % 8;
    const CnfFormula f = oracle::random_cnf(n, n * 4, 3, 5000 + round);
    const bool sat = oracle::brute_force_model(f).has_value();
    BranchingSequence seq;
    for (int k = 0; k < 10; ++k) {
      if (rng() % 5 == 0) seq.push_restart();
      seq.push(Lit(Var(1 + rng() % n), rng() % 2));
    }
    for (bool relaxed : {false, true}) {
      BranchingSequence plain(seq.literals());
      SolverConfig cfg =
          with(LearningScheme::kFirstNewCut, relaxed ? seq : plain);
      cfg.cl_minus_minus = relaxed;
      cfg.validate_trail = true;
      const SolveResult r = solve(f, cfg);
      EXPECT_EQ(r.outcome, sat ? Outcome::kSat : Outcome::kUnsat);
      if (sat) {
        EXPECT_TRUE(oracle::satisfies(f, to_bits(r.model, n)));
      } else {
        ASSERT_TRUE(r.proof.complete);
        EXPECT_TRUE(check_res_refutation(cl_to_res(r.proof, f), f));
      }
    }
  }
}

TEST(Solve, DpllMatchesReferenceDecisionCount) {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 200; ++round) {
    const std::uint32_t n = 3 + rng() % 10;
    const CnfFormula f = oracle::random_cnf(n, n * (3 + rng() % 3), 3, 9000 + round);
    const oracle::DpllRun ref = oracle::reference_dpll(f);
    const SolveResult r = solve(f, with(LearningScheme::kNone));
    EXPECT_EQ(r.outcome == Outcome::kSat, ref.sat) << "round " << round;
    EXPECT_EQ(r.stats.decisions, ref.decisions) << "round " << round;
  }
}

TEST(Solve, FirstUipClausesAreAsserting) {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const std::uint32_t n = 10 + rng() % 15;
    const CnfFormula f = oracle::random_cnf(n, n * 4 + 5, 3, 7000 + round);
    SolverConfig cfg = with(LearningScheme::kFirstUip);
    cfg.on_conflict = [&](const ConflictGraph& g, const Cut& cut) {
      if (g.conflict_level() == 0) return;
      int at_level = 0;
      for (Lit l : cut_to_clause(g, cut))
        if (g.node(*g.find(~l)).level == g.conflict_level()) ++at_level;
      EXPECT_EQ(at_level, 1);
      ++checked;
    };
    solve(f, cfg);
  }
  EXPECT_GT(checked, 100);
}

TEST(Solve, TrailInvariantsHoldAfterSolve) {
  const CnfFormula f = oracle::random_cnf(20, 70, 3, 77);
  SolverConfig cfg = with(LearningScheme::kFirstUip);
  cfg.validate_trail = true;
  Solver solver(f, cfg);
  solver.solve();
  EXPECT_EQ(solver.check_trail(), "");
}
