#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clsat/bench.hpp"
#include "clsat/formula.hpp"
#include "clsat/proof_bridge.hpp"

using namespace clsat;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
  return out;
}

// CSV without the wall-time column.
std::string strip_time(const std::string& csv) {
  std::string out;
  for (const std::string& l : lines(csv)) out += l.substr(0, l.rfind(',')) + '\n';
  return out;
}

std::string csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("clsat_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                              ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args, const std::string& out_name = "stdout") {
    const std::string cmd = std::string(CLSAT_BIN) + " " + args + " > " +
                            path(out_name) + " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

}  // namespace

TEST(Bench, ConfigMapping) {
  const BranchingSequence seq({Lit::from_dimacs(1)});
  const Budget budget{7, 9};
  const SolverConfig dpll = make_config(BenchConfig::kDpll, seq, budget);
  EXPECT_EQ(dpll.learning, LearningScheme::kNone);
  EXPECT_FALSE(dpll.sequence);
  EXPECT_EQ(dpll.conflict_budget, 7u);
  EXPECT_EQ(dpll.decision_budget, 9u);
  const SolverConfig def = make_config(BenchConfig::kClDefault, seq, budget);
  EXPECT_EQ(def.learning, LearningScheme::kFirstUip);
  EXPECT_FALSE(def.sequence);
  const SolverConfig s = make_config(BenchConfig::kClSequence, seq, budget);
  EXPECT_EQ(s.learning, LearningScheme::kFirstUip);
  ASSERT_TRUE(s.sequence);
  EXPECT_EQ(*s.sequence, seq);
}

TEST(Bench, LabelsRoundTrip) {
  for (BenchConfig c :
       {BenchConfig::kDpll, BenchConfig::kClDefault, BenchConfig::kClSequence})
    EXPECT_EQ(parse_bench_config(to_string(c)), c);
  for (BenchFamily f :
       {BenchFamily::kGrid, BenchFamily::kRandomPebbling, BenchFamily::kGtn})
    EXPECT_EQ(parse_bench_family(to_string(f)), f);
  EXPECT_FALSE(parse_bench_config("cdcl"));
}

TEST(Bench, CsvShapeAndOrder) {
  std::vector<BenchInstance> inst{grid_instance(3, BenchVariant::kUnsat),
                                  gtn_instance(5, BenchVariant::kSat),
                                  random_pebbling_instance(8, 3, 3, 2,
                                                           BenchVariant::kUnsat)};
  const std::vector<BenchConfig> cfgs{BenchConfig::kDpll, BenchConfig::kClDefault,
                                      BenchConfig::kClSequence};
  const auto rows = run_bench(inst, cfgs, Budget{}, 3);
  ASSERT_EQ(rows.size(), 9u);
  const auto out = lines(csv(rows));
  ASSERT_EQ(out.size(), 10u);
  EXPECT_EQ(out[0], kBenchCsvHeader);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].config, cfgs[k % 3]);
    EXPECT_EQ(rows[k].family, inst[k / 3].family);
    EXPECT_EQ(fields(out[k + 1]).size(), fields(kBenchCsvHeader).size());
  }
  EXPECT_EQ(rows[0].outcome, Outcome::kUnsat);
  EXPECT_EQ(rows[3].outcome, Outcome::kSat);
  EXPECT_EQ(rows[2].stats.fallback_decisions, 0u);
}

TEST(Bench, DeterministicAcrossJobs) {
  std::vector<BenchInstance> inst;
  for (std::uint32_t l = 2; l <= 6; ++l) {
    inst.push_back(grid_instance(l, BenchVariant::kUnsat));
    inst.push_back(grid_instance(l, BenchVariant::kSat, l));
  }
  for (std::uint64_t seed : {1, 3, 4})
    inst.push_back(random_pebbling_instance(8, 4, 4, seed, BenchVariant::kSat));
  const std::vector<BenchConfig> cfgs{BenchConfig::kDpll, BenchConfig::kClDefault,
                                      BenchConfig::kClSequence};
  const Budget budget{20'000, 50'000};
  const std::string one = strip_time(csv(run_bench(inst, cfgs, budget, 1)));
  EXPECT_EQ(one, strip_time(csv(run_bench(inst, cfgs, budget, 4))));
  EXPECT_EQ(one, strip_time(csv(run_bench(inst, cfgs, budget, 1))));
}

TEST(Bench, BudgetedRowsReportTheBudget) {
  const auto row = run_one(grid_instance(8, BenchVariant::kUnsat),
                           BenchConfig::kDpll, Budget{1'000'000, 500});
  EXPECT_EQ(row.outcome, Outcome::kBudgetExceeded);
  EXPECT_EQ(row.stats.decisions, 500u);
}

// Rows re-solved with proof logging yield refutations that verify.
TEST(Bench, UnsatRowsHaveVerifyingRefutations) {
  for (const BenchInstance& inst :
       {grid_instance(4, BenchVariant::kUnsat), gtn_instance(6, BenchVariant::kUnsat),
        random_pebbling_instance(8, 4, 4, 4, BenchVariant::kUnsat)})
    for (BenchConfig c : {BenchConfig::kDpll, BenchConfig::kClDefault,
                          BenchConfig::kClSequence}) {
      SolverConfig cfg = make_config(c, inst.sequence, Budget{});
      cfg.log_proof = true;
      const SolveResult r = solve(inst.formula, cfg);
      ASSERT_EQ(r.outcome, Outcome::kUnsat);
      EXPECT_TRUE(check_res_refutation(cl_to_res(r.proof, inst.formula),
                                       inst.formula));
    }
}

TEST_F(Cli, GenGtnClauseCount) {
  ASSERT_EQ(run("gen-gtn --n 10 -o " + path("gt10.cnf")), 0);
  std::ifstream in(path("gt10.cnf"));
  EXPECT_EQ(parse_dimacs(in).clauses().size(), 775u);
}

TEST_F(Cli, SolveExitCodes) {
  write("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  EXPECT_EQ(run("solve " + path("unsat.cnf")), 20);
  const auto out = lines(read("stdout"));
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0], "UNSAT");
  EXPECT_EQ(out[1], "decisions 0");

  write("sat.cnf", "p cnf 2 1\n1 2 0\n");
  EXPECT_EQ(run("solve --model " + path("sat.cnf")), 10);
  EXPECT_EQ(lines(read("stdout"))[0], "SAT");

  ASSERT_EQ(run("gen-grid --layers 8 -o " + path("g8.cnf")), 0);
  EXPECT_EQ(run("solve --learning none --decisions 100 " + path("g8.cnf")), 30);
}

TEST_F(Cli, ErrorsExitTwo) {
  EXPECT_EQ(run("solve " + path("missing.cnf")), 2);
  EXPECT_FALSE(read("stderr").empty());
  write("bad.cnf", "p cnf 1 1\n2 0\n");
  EXPECT_EQ(run("solve " + path("bad.cnf")), 2);
  EXPECT_EQ(run("gen-grid"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  write("f.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  EXPECT_EQ(run("solve --learning sideways " + path("f.cnf")), 2);
}

TEST_F(Cli, ProofPipeline) {
  ASSERT_EQ(run("gen-grid --layers 4 -o " + path("g.cnf") + " --graph " +
                path("g.peb")),
            0);
  ASSERT_EQ(run("gen-seq --graph " + path("g.peb") + " -o " + path("g.seq")), 0);
  EXPECT_EQ(run("solve " + path("g.cnf") + " --seq " + path("g.seq") +
                " --proof " + path("g.proof")),
            20);
  EXPECT_EQ(run("verify-proof " + path("g.cnf") + " " + path("g.proof")), 0);
  EXPECT_EQ(lines(read("stdout"))[0].rfind("VALID", 0), 0u);
  EXPECT_EQ(run("pt-extend " + path("g.cnf") + " " + path("g.proof") + " -o " +
                path("pt.cnf") + " --seq " + path("pt.seq")),
            0);
  EXPECT_EQ(run("solve --learning first_new_cut " + path("pt.cnf") + " --seq " +
                path("pt.seq")),
            20);

  write("broken.proof", "i 1 0\ni -1 0\nr 0 1 2 0\n");
  EXPECT_EQ(run("verify-proof " + path("g.cnf") + " " + path("broken.proof")), 1);
  EXPECT_EQ(lines(read("stdout"))[0].rfind("INVALID", 0), 0u);
}

TEST_F(Cli, BenchGridRange) {
  ASSERT_EQ(run("bench --family grid --layers 2..20 --configs dpll,cl_sequence "
                "--decisions 20000 --markdown " +
                    path("t.md"),
                "t.csv"),
            0);
  const auto out = lines(read("t.csv"));
  ASSERT_EQ(out.size(), 1u + 2 * 19);
  EXPECT_EQ(out[0], kBenchCsvHeader);
  int seq_rows = 0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const auto f = fields(out[k]);
    if (f[3] != "cl_sequence") continue;
    ++seq_rows;
    EXPECT_EQ(f[4], "UNSAT") << out[k];
    EXPECT_EQ(f[8], "0") << out[k];
  }
  EXPECT_EQ(seq_rows, 19);
  EXPECT_EQ(lines(read("t.md")).size(), 2u + 2 * 19);
}
