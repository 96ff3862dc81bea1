#pragma once

// The DPLL / clause-learning search loop: sequence-guided branching with an
// activity fallback, one learned clause per conflict, assertion-level
// backjumping, restarts at sequence markers, and relaxed (CL--) branching on
// already-assigned variables.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clsat/conflict.hpp"
#include "clsat/formula.hpp"
#include "clsat/resolution.hpp"
#include "clsat/sequence.hpp"
#include "clsat/trail.hpp"

namespace clsat {

enum class RestartPolicy : std::uint8_t { kOff, kSequenceMarkers };

struct SolverConfig {
  LearningScheme learning = LearningScheme::kFirstUip;
  std::optional<BranchingSequence> sequence;
  bool cl_minus_minus = false;
  RestartPolicy restart_policy = RestartPolicy::kSequenceMarkers;
  std::optional<std::uint64_t> conflict_budget;
  std::optional<std::uint64_t> decision_budget;
  bool log_proof = true;
  /// Runs the trail validator after every propagation fixpoint.
  bool validate_trail = false;
  /// Called for every analyzed conflict with the cut that was learned.
  std::function<void(const ConflictGraph&, const Cut&)> on_conflict;
};

/// Throws std::invalid_argument on inconsistent settings.
void validate_config(const SolverConfig& cfg, std::uint32_t num_vars);

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t learned_clauses = 0;
  std::uint64_t max_level = 0;
  std::uint64_t fallback_decisions = 0;
  std::uint64_t restarts = 0;
};

struct LearnedClauseRecord {
  Clause clause;
  std::vector<Lit> conflict_side;
  TrivialDerivation derivation;
  LearningScheme scheme = LearningScheme::kFirstUip;
  std::uint64_t conflict_index = 0;
  /// The clause was already known and was not added again.
  bool redundant = false;
  /// Derived for the proof only: the reason of a flipped branch after a
  /// non-asserting clause, or a DPLL branch clause. Never watched and not
  /// counted as learned.
  bool reason_only = false;
};

/// Learned clauses in learning order. A refutation ends with a record whose
/// clause is empty, derived from the level-0 conflict.
struct ProofLog {
  std::vector<LearnedClauseRecord> records;
  bool complete = false;
};

enum class Outcome : std::uint8_t { kSat, kUnsat, kBudgetExceeded };
std::string to_string(Outcome o);

struct SolveResult {
  Outcome outcome = Outcome::kBudgetExceeded;
  PartialAssignment model;
  ProofLog proof;
  SolveStats stats;
};

SolveResult solve(const CnfFormula& f, const SolverConfig& cfg);

class Solver {
 public:
  Solver(const CnfFormula& f, SolverConfig cfg);

  SolveResult solve();

  const Propagator& propagator() const { return prop_; }
  /// Empty if the trail invariants hold, otherwise a description.
  std::string check_trail() const;

 private:
  enum class Step : std::uint8_t { kContinue, kSat, kUnsat, kBudget };

  struct Decision {
    enum Kind : std::uint8_t { kBranch, kRedecide, kForced, kRestart, kSat };
    Kind kind = kSat;
    Lit lit;  // literal made TRUE
    bool fallback = false;
  };

  Decision next_decision();
  Step handle_conflict(ClauseId conflicting);
  Step handle_forced(Lit decision);
  Step learn(const ConflictGraph& g);
  /// With `refuted`, the clause falsified by the current branch, also logs
  /// the clauses closing each exhausted level.
  Step chronological_backtrack(int from_level,
                               std::optional<Clause> refuted = {});
  Clause close_branch(int level, const Clause& second);
  void log_derived(Clause c, TrivialDerivation d, LearningScheme scheme);
  void backjump(const Clause& learned, Lit asserting);
  /// Adds (or looks up) a learned clause and asserts it if it is unit.
  /// Returns true if that implied a literal or raised a conflict.
  bool add_learned(const Clause& learned);
  void undo_to(int level);
  void finish_refutation(const ConflictGraph& g);
  ClauseId known_id(const Clause& c) const;
  void bump(const Clause& c);
  void bump(Lit l);
  void decay();
  std::optional<Lit> pick_fallback();
  bool sequence_satisfies_formula() const;
  PartialAssignment model() const;

  const CnfFormula& formula_;
  SolverConfig cfg_;
  Propagator prop_;
  SolveStats stats_;
  ProofLog proof_;
  std::unordered_map<Clause, ClauseId> known_;
  std::size_t seq_pos_ = 0;
  bool exhaustion_checked_ = false;
  std::optional<ClauseId> pending_conflict_;
  // DPLL proof logging: the clause refuting the first branch of each level.
  std::vector<Clause> first_branch_;

  std::vector<double> activity_;
  double activity_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_pos_;
  void heap_insert(std::uint32_t code);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_before(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t heap_pop();
};

}  // namespace clsat
