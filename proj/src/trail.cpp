#include "clsat/trail.hpp"

#include <algorithm>
#include <cassert>

namespace clsat {

Propagator::Propagator(std::uint32_t num_vars)
    : num_vars_(num_vars),
      watches_(2 * static_cast<std::size_t>(num_vars)),
      values_(num_vars, Value::kUnassigned),
      levels_(num_vars, 0),
      reasons_(num_vars, kNoReason),
      positions_(num_vars, 0),
      redecided_at_(num_vars, 0) {
  trail_.reserve(num_vars);
}

ClauseId Propagator::add_clause(std::span<const Lit> lits, bool watch) {
  const auto id = static_cast<ClauseId>(clauses_.size());
  clauses_.emplace_back(lits.begin(), lits.end());
  unwatched_.push_back(!watch);
  if (watch && clauses_.back().size() >= 2) attach(id);
  return id;
}

void Propagator::attach(ClauseId id) {
  auto& c = clauses_[id];
  // Rank: true < unassigned < false-at-high-level < false-at-low-level, so
  // the watches land on literals that can still become unit or false last.
  auto rank = [&](Lit l) -> long long {
    switch (value(l)) {
      case Value::kTrue: return -2;
      case Value::kUnassigned: return -1;
      case Value::kFalse: return static_cast<long long>(num_vars_) + 1 -
                                 static_cast<long long>(trail_pos(l.var()));
    }
    return 0;
  };
  for (std::size_t w = 0; w < 2; ++w) {
    std::size_t best = w;
    for (std::size_t k = w + 1; k < c.size(); ++k)
      if (rank(c[k]) < rank(c[best])) best = k;
    std::swap(c[w], c[best]);
  }
  watches_[c[0].code()].push_back(id);
  watches_[c[1].code()].push_back(id);
}

Clause Propagator::clause(ClauseId id) const {
  return Clause(std::vector<Lit>(clauses_[id].begin(), clauses_[id].end()));
}

std::optional<int> Propagator::redecision_level(Var v) const {
  const int d = redecided_at_[v.index - 1];
  if (d == 0) return std::nullopt;
  return d;
}

void Propagator::assign(Lit l, ClauseId reason, EntryKind kind) {
  const std::size_t i = l.var().index - 1;
  assert(values_[i] == Value::kUnassigned);
  values_[i] = l.negated() ? Value::kFalse : Value::kTrue;
  levels_[i] = decision_level();
  reasons_[i] = reason;
  positions_[i] = trail_.size();
  trail_.push_back(TrailEntry{l, decision_level(), reason, kind});
}

void Propagator::decide(Lit l, EntryKind kind) {
  levels_info_.push_back(LevelInfo{l, trail_.size(), false,
                                   kind == EntryKind::kFlip});
  assign(l, kNoReason, kind);
}

void Propagator::redecide(Lit l) {
  assert(value(l) == Value::kTrue);
  levels_info_.push_back(LevelInfo{l, trail_.size(), true, false});
  redecided_at_[l.var().index - 1] = decision_level();
}

void Propagator::imply(Lit l, ClauseId reason) {
  assign(l, reason, EntryKind::kImplied);
}

std::optional<ClauseId> Propagator::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit false_lit = ~trail_[qhead_++].lit;
    ++propagations_;
    auto& ws = watches_[false_lit.code()];
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      const ClauseId id = ws[i];
      auto& c = clauses_[id];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (value(c[0]) == Value::kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != Value::kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1].code()].push_back(id);
          moved = true;
          break;
        }
      }
      if (moved) {
        ++i;
        continue;
      }
      ws[j++] = ws[i++];
      if (value(c[0]) == Value::kFalse) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return id;
      }
      imply(c[0], id);
    }
    ws.resize(j);
  }
  return std::nullopt;
}

void Propagator::backtrack(int level) {
  if (level >= decision_level()) return;
  const std::size_t keep = levels_info_[level].trail_start;
  for (std::size_t k = trail_.size(); k > keep; --k) {
    const std::size_t i = trail_[k - 1].lit.var().index - 1;
    values_[i] = Value::kUnassigned;
    reasons_[i] = kNoReason;
  }
  for (int d = decision_level(); d > level; --d) {
    const LevelInfo& info = levels_info_[d - 1];
    if (info.redecision) redecided_at_[info.decision.var().index - 1] = 0;
  }
  trail_.resize(keep);
  levels_info_.resize(level);
  qhead_ = std::min(qhead_, trail_.size());
}

bool Propagator::is_falsified(ClauseId id) const {
  return std::all_of(clauses_[id].begin(), clauses_[id].end(),
                     [&](Lit l) { return value(l) == Value::kFalse; });
}

bool Propagator::is_satisfied(ClauseId id) const {
  return std::any_of(clauses_[id].begin(), clauses_[id].end(),
                     [&](Lit l) { return value(l) == Value::kTrue; });
}

}  // namespace clsat
