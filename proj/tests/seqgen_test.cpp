#include <gtest/gtest.h>

#include "clsat/gtn.hpp"
#include "clsat/pebbling.hpp"
#include "clsat/seqgen.hpp"
#include "clsat/solver.hpp"

using namespace clsat;

namespace {

std::vector<int> dimacs(const BranchingSequence& s) {
  std::vector<int> out;
  for (Lit l : s.literals()) out.push_back(l.to_dimacs());
  return out;
}

// c, f, d, g are sources; a over (c, d); e over (f, g);
// b over (d, f, e); the target t over (a, b).
PebblingGraph eight_node_graph() {
  PebblingGraph g;
  const NodeIndex c = g.add_node({Var(1), Var(2)}, {});
  const NodeIndex f = g.add_node({Var(3), Var(4)}, {});
  const NodeIndex d = g.add_node({Var(5), Var(6)}, {});
  const NodeIndex gg = g.add_node({Var(7), Var(8)}, {});
  const NodeIndex a = g.add_node({Var(9)}, {c, d});
  const NodeIndex e = g.add_node({Var(10), Var(11), Var(12)}, {f, gg});
  const NodeIndex b = g.add_node({Var(13)}, {d, f, e});
  g.add_target(g.add_node({Var(14), Var(15)}, {a, b}));
  return g;
}

SolveResult run(const CnfFormula& f, const BranchingSequence& seq) {
  SolverConfig cfg;
  cfg.learning = LearningScheme::kFirstUip;
  cfg.sequence = seq;
  cfg.log_proof = false;
  return solve(f, cfg);
}

}  // namespace

// Grid nodes a..j are 0..9 with labels (2k+1, 2k+2): h1 h2 e1 e2 a1 b1 f1
// f2 c1.
TEST(PebSeq, FourLayerGrid) {
  const std::vector<int> want{15, 16, 9, 10, 1, 3, 11, 12, 5};
  EXPECT_EQ(dimacs(peb_seq_1uip(gen_grid(4))), want);
  EXPECT_EQ(dimacs(grid_peb_seq_1uip(gen_grid(4))), want);
}

// a1 c1 b1 e1 e2 e3 f1 f1 e1 f1 f1.
TEST(PebSeq, EightNodeGraph) {
  EXPECT_EQ(dimacs(peb_seq_1uip(eight_node_graph())),
            (std::vector<int>{9, 1, 13, 10, 11, 12, 3, 3, 10, 3, 3}));
}

TEST(PebSeq, EightNodeGraphIsComplete) {
  const PebblingGraph g = eight_node_graph();
  const BranchingSequence seq = peb_seq_1uip(g);
  const SolveResult r = run(pebbling_to_cnf(g), seq);
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  EXPECT_EQ(r.stats.fallback_decisions, 0u);
}

TEST(GridSeq, SmallGrids) {
  EXPECT_EQ(dimacs(grid_peb_seq_1uip(gen_grid(1))), std::vector<int>{});
  EXPECT_EQ(dimacs(peb_seq_1uip(gen_grid(1))), std::vector<int>{});
  EXPECT_EQ(dimacs(grid_peb_seq_1uip(gen_grid(2))), std::vector<int>{1});
  EXPECT_EQ(dimacs(grid_peb_seq_1uip(gen_grid(3))), (std::vector<int>{7, 8, 1, 3}));
  const SolveResult r = run(pebbling_to_cnf(gen_grid(1)), BranchingSequence());
  EXPECT_EQ(r.outcome, Outcome::kUnsat);
  EXPECT_EQ(r.stats.decisions, 0u);
}

TEST(GridSeq, AgreesWithGeneralAlgorithm) {
  for (std::uint32_t layers = 2; layers <= 12; ++layers) {
    const PebblingGraph g = gen_grid(layers);
    EXPECT_TRUE(is_grid(g));
    EXPECT_EQ(peb_seq_1uip(g), grid_peb_seq_1uip(g)) << layers;
  }
}

// No labels on the rightmost path, both labels on other inner nodes, one
// label on other sources: (L-1)^2 literals in total.
TEST(GridSeq, SizeLaw) {
  for (std::uint32_t layers = 2; layers <= 50; ++layers) {
    const BranchingSequence s = grid_peb_seq_1uip(gen_grid(layers));
    EXPECT_EQ(s.size(), (layers - 1) * (layers - 1));
    EXPECT_LE(s.size(), 2 * gen_grid(layers).size());
  }
}

TEST(GridSeq, CompleteOnGrids) {
  for (std::uint32_t layers = 2; layers <= 20; ++layers) {
    const PebblingGraph g = gen_grid(layers);
    const BranchingSequence seq = grid_peb_seq_1uip(g);
    const SolveResult r = run(pebbling_to_cnf(g), seq);
    EXPECT_EQ(r.outcome, Outcome::kUnsat) << layers;
    EXPECT_EQ(r.stats.fallback_decisions, 0u) << layers;
    EXPECT_LE(r.stats.decisions, seq.size()) << layers;
  }
}

TEST(PebSeq, LiteralsBelongToTheFormula) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PebblingGraph g = gen_random_pebbling(5 + seed % 20, 4, 4, seed);
    const std::uint32_t n = pebbling_to_cnf(g).num_vars();
    for (Lit l : peb_seq_1uip(g).literals()) {
      EXPECT_GE(l.var().index, 1u);
      EXPECT_LE(l.var().index, n);
    }
  }
}

TEST(PebSeq, CompleteOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const PebblingGraph g = gen_random_pebbling(5 + seed % 25, 5, 6, seed);
    const BranchingSequence seq = peb_seq_1uip(g);
    const SolveResult r = run(pebbling_to_cnf(g), seq);
    EXPECT_EQ(r.outcome, Outcome::kUnsat) << seed;
    EXPECT_EQ(r.stats.fallback_decisions, 0u) << seed;
    EXPECT_LE(r.stats.decisions, seq.size()) << seed;
  }
}

TEST(PebSeq, RejectsUnsupportedGraphs) {
  PebblingGraph two_targets = gen_grid(2);
  two_targets.add_target(0);
  EXPECT_THROW(peb_seq_1uip(two_targets), std::invalid_argument);
  EXPECT_FALSE(is_grid(eight_node_graph()));
  EXPECT_THROW(grid_peb_seq_1uip(eight_node_graph()), std::invalid_argument);
}

TEST(GtnSeq, PatternForFour) {
  const GtnInstance gt(4);
  std::vector<int> want;
  for (auto [i, j] : std::vector<std::pair<int, int>>{
           {2, 1}, {3, 1}, {1, 2}, {3, 2}, {1, 3}, {2, 3},
           {1, 4}, {2, 4}, {3, 4}, {1, 4}, {2, 4}, {3, 4}})
    want.push_back(static_cast<int>(gt.var(i, j).index));
  EXPECT_EQ(dimacs(gtn_seq(4)), want);
}

TEST(GtnSeq, SizesAndRange) {
  EXPECT_EQ(gtn_seq(3).size(), 6u);
  for (std::uint32_t n = 3; n <= 30; ++n) {
    const BranchingSequence s = gtn_seq(n);
    EXPECT_EQ(s.size(), n * (n - 1));
    for (Lit l : s.literals()) {
      EXPECT_FALSE(l.negated());
      EXPECT_LE(l.var().index, n * (n - 1));
    }
  }
}
