#pragma once

// Assignment trail with decision levels, per-variable reasons, and
// two-watched-literal unit propagation. The reasons recorded here are the
// only implication-graph representation kept during search.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clsat/formula.hpp"

namespace clsat {

using ClauseId = std::uint32_t;
inline constexpr ClauseId kNoReason = UINT32_MAX;

enum class EntryKind : std::uint8_t {
  kImplied,
  kDecision,  // chosen by the branching rule
  kFlip,      // the opposite branch taken after chronological backtracking
};

struct TrailEntry {
  Lit lit;
  int level = 0;
  ClauseId reason = kNoReason;
  EntryKind kind = EntryKind::kImplied;
};

/// Per-level bookkeeping. A level opened by re-branching on an already
/// assigned literal (relaxed branching) has `redecision` set and may own no
/// trail entries.
struct LevelInfo {
  Lit decision;
  std::size_t trail_start = 0;
  bool redecision = false;
  bool flip = false;
};

class Propagator {
 public:
  explicit Propagator(std::uint32_t num_vars);

  std::uint32_t num_vars() const { return num_vars_; }

  /// Stores a clause and attaches watches. Literals may be in any order;
  /// the two watches go to the best literals under the current assignment.
  /// Unit and empty clauses are stored without watches; assigning units is
  /// the caller's job. Unwatched clauses never propagate; they only serve
  /// as reasons passed to imply().
  ClauseId add_clause(std::span<const Lit> lits, bool watch = true);
  ClauseId add_clause(const Clause& c, bool watch = true) {
    return add_clause(c.lits(), watch);
  }
  std::size_t num_clauses() const { return clauses_.size(); }
  /// False for clauses added with watch = false.
  bool propagates(ClauseId id) const { return !unwatched_[id]; }
  std::span<const Lit> lits(ClauseId id) const { return clauses_[id]; }
  /// Canonical (sorted) copy of a stored clause.
  Clause clause(ClauseId id) const;

  Value value(Var v) const { return values_[v.index - 1]; }
  Value value(Lit l) const {
    const Value v = values_[l.var().index - 1];
    return l.negated() ? negate(v) : v;
  }
  int level(Var v) const { return levels_[v.index - 1]; }
  ClauseId reason(Var v) const { return reasons_[v.index - 1]; }
  std::size_t trail_pos(Var v) const { return positions_[v.index - 1]; }
  /// Level at which `v` was re-branched on, if it was.
  std::optional<int> redecision_level(Var v) const;

  int decision_level() const { return static_cast<int>(levels_info_.size()); }
  /// Info for level d in 1..decision_level().
  const LevelInfo& level_info(int d) const { return levels_info_[d - 1]; }
  const std::vector<TrailEntry>& trail() const { return trail_; }
  bool all_assigned() const { return trail_.size() == num_vars_; }

  /// Opens a new level and assigns `l` TRUE as its decision.
  void decide(Lit l, EntryKind kind = EntryKind::kDecision);
  /// Opens a new level whose decision is the already-true literal `l`.
  void redecide(Lit l);
  /// Assigns `l` TRUE at the current level with the given reason.
  void imply(Lit l, ClauseId reason);

  /// Runs unit propagation to fixpoint. Returns a falsified clause on
  /// conflict.
  std::optional<ClauseId> propagate();
  void backtrack(int level);

  bool is_falsified(ClauseId id) const;
  bool is_satisfied(ClauseId id) const;

  std::uint64_t propagations() const { return propagations_; }

 private:
  void assign(Lit l, ClauseId reason, EntryKind kind);
  void attach(ClauseId id);

  std::uint32_t num_vars_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<bool> unwatched_;
  std::vector<std::vector<ClauseId>> watches_;  // by literal code
  std::vector<Value> values_;
  std::vector<int> levels_;
  std::vector<ClauseId> reasons_;
  std::vector<std::size_t> positions_;
  std::vector<int> redecided_at_;  // 0 = not re-branched
  std::vector<TrailEntry> trail_;
  std::vector<LevelInfo> levels_info_;
  std::size_t qhead_ = 0;
  std::uint64_t propagations_ = 0;
};

}  // namespace clsat
