#include "clsat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace clsat {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kSat: return "SAT";
    case Outcome::kUnsat: return "UNSAT";
    case Outcome::kBudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

void validate_config(const SolverConfig& cfg, std::uint32_t num_vars) {
  if (cfg.cl_minus_minus && cfg.learning == LearningScheme::kNone)
    throw std::invalid_argument("relaxed branching needs a learning scheme");
  if (!cfg.sequence) return;
  if (cfg.sequence->has_restarts()) {
    if (cfg.learning == LearningScheme::kNone)
      throw std::invalid_argument("restart markers need a learning scheme");
    if (!cfg.cl_minus_minus)
      throw std::invalid_argument(
          "restart markers are only allowed with relaxed branching");
  }
  for (Lit l : cfg.sequence->literals())
    if (l.var().index > num_vars)
      throw std::invalid_argument("sequence literal " +
                                  std::to_string(l.to_dimacs()) +
                                  " is out of range");
}

SolveResult solve(const CnfFormula& f, const SolverConfig& cfg) {
  return Solver(f, cfg).solve();
}

Solver::Solver(const CnfFormula& f, SolverConfig cfg)
    : formula_(f), cfg_(std::move(cfg)), prop_(f.num_vars()) {
  validate_config(cfg_, f.num_vars());
  const std::size_t n = 2 * static_cast<std::size_t>(f.num_vars());
  activity_.assign(n, 0.0);
  heap_pos_.assign(n, -1);
  for (std::uint32_t code = 0; code < n; ++code) heap_insert(code);
}

SolveResult Solver::solve() {
  SolveResult result;
  auto finish = [&](Outcome o) {
    result.outcome = o;
    stats_.propagations = prop_.propagations();
    result.stats = stats_;
    result.proof = std::move(proof_);
    if (o == Outcome::kSat) {
      result.model = model();
      if (!result.model.satisfies(formula_))
        throw std::logic_error("model does not satisfy the formula");
    }
    return std::move(result);
  };

  if (formula_.contains_empty_clause()) {
    if (cfg_.log_proof) {
      LearnedClauseRecord r;
      r.clause = Clause();
      r.derivation.add_initial(Clause());
      r.scheme = cfg_.learning;
      proof_.records.push_back(std::move(r));
      proof_.complete = true;
    }
    return finish(Outcome::kUnsat);
  }
  for (const Clause& c : formula_.clauses())
    known_.emplace(c, prop_.add_clause(c));
  for (ClauseId id = 0; id < prop_.num_clauses(); ++id) {
    if (prop_.lits(id).size() != 1) continue;
    const Lit l = prop_.lits(id)[0];
    if (prop_.value(l) == Value::kUnassigned) {
      prop_.imply(l, id);
    } else if (prop_.value(l) == Value::kFalse && !pending_conflict_) {
      pending_conflict_ = id;
    }
  }

  for (;;) {
    std::optional<ClauseId> conflict = pending_conflict_;
    pending_conflict_.reset();
    if (!conflict) conflict = prop_.propagate();
    if (conflict) {
      switch (handle_conflict(*conflict)) {
        case Step::kContinue: continue;
        case Step::kSat: return finish(Outcome::kSat);
        case Step::kUnsat: return finish(Outcome::kUnsat);
        case Step::kBudget: return finish(Outcome::kBudgetExceeded);
      }
    }
    if (cfg_.validate_trail) {
      const std::string problem = check_trail();
      if (!problem.empty()) throw std::logic_error("trail: " + problem);
    }

    const Decision d = next_decision();
    if (d.kind == Decision::kSat) return finish(Outcome::kSat);
    if (d.kind == Decision::kRestart) {
      if (cfg_.restart_policy == RestartPolicy::kSequenceMarkers) {
        undo_to(0);
        ++stats_.restarts;
      }
      continue;
    }
    if (cfg_.decision_budget && stats_.decisions >= *cfg_.decision_budget)
      return finish(Outcome::kBudgetExceeded);
    ++stats_.decisions;
    if (d.fallback) ++stats_.fallback_decisions;
    if (d.kind == Decision::kBranch) {
      prop_.decide(d.lit);
    } else if (d.kind == Decision::kRedecide) {
      prop_.redecide(d.lit);
    } else {
      const Step s = handle_forced(d.lit);
      if (s == Step::kUnsat) return finish(Outcome::kUnsat);
      if (s == Step::kBudget) return finish(Outcome::kBudgetExceeded);
    }
    stats_.max_level = std::max<std::uint64_t>(
        stats_.max_level, static_cast<std::uint64_t>(prop_.decision_level()));
  }
}

Solver::Decision Solver::next_decision() {
  if (cfg_.sequence) {
    const auto& entries = cfg_.sequence->entries();
    while (seq_pos_ < entries.size()) {
      const SequenceEntry& e = entries[seq_pos_++];
      if (std::holds_alternative<RestartMarker>(e))
        return Decision{Decision::kRestart, Lit(), false};
      const Lit s = std::get<Lit>(e);
      const Lit want = ~s;
      if (prop_.value(s) == Value::kUnassigned)
        return Decision{Decision::kBranch, want, false};
      if (!cfg_.cl_minus_minus) continue;
      const Var v = s.var();
      if (prop_.redecision_level(v) ||
          prop_.trail()[prop_.trail_pos(v)].kind != EntryKind::kImplied)
        continue;
      if (prop_.value(want) == Value::kTrue)
        return Decision{Decision::kRedecide, want, false};
      return Decision{Decision::kForced, want, false};
    }
    if (!exhaustion_checked_) {
      exhaustion_checked_ = true;
      if (!entries.empty() && sequence_satisfies_formula())
        return Decision{Decision::kSat, Lit(), false};
    }
  }
  if (prop_.all_assigned()) return Decision{Decision::kSat, Lit(), false};
  const auto l = pick_fallback();
  if (!l) return Decision{Decision::kSat, Lit(), false};
  return Decision{Decision::kBranch, *l, true};
}

Solver::Step Solver::handle_conflict(ClauseId conflicting) {
  if (cfg_.conflict_budget && stats_.conflicts >= *cfg_.conflict_budget)
    return Step::kBudget;
  ++stats_.conflicts;
  if (cfg_.learning == LearningScheme::kNone) {
    if (!cfg_.log_proof) {
      if (prop_.decision_level() == 0) return Step::kUnsat;
      return chronological_backtrack(prop_.decision_level());
    }
    const ConflictGraph g = build_conflict_graph(prop_, conflicting);
    if (g.conflict_level() == 0) {
      finish_refutation(g);
      return Step::kUnsat;
    }
    const Cut decisions = scheme_decision(g);
    Clause refuted = cut_to_clause(g, decisions);
    log_derived(refuted, extract_trivial_derivation(g, decisions),
                LearningScheme::kDecision);
    return chronological_backtrack(prop_.decision_level(), std::move(refuted));
  }
  const ConflictGraph g = build_conflict_graph(prop_, conflicting);
  if (g.conflict_level() == 0) {
    finish_refutation(g);
    return Step::kUnsat;
  }
  return learn(g);
}

Solver::Step Solver::handle_forced(Lit decision) {
  const auto g = build_forced_conflict_graph(prop_, decision);
  assert(g);
  if (cfg_.conflict_budget && stats_.conflicts >= *cfg_.conflict_budget)
    return Step::kBudget;
  ++stats_.conflicts;
  return learn(*g);
}

Solver::Step Solver::learn(const ConflictGraph& g) {
  Cut cut;
  bool redundant = false;
  switch (cfg_.learning) {
    case LearningScheme::kFirstUip: cut = scheme_first_uip(g); break;
    case LearningScheme::kDecision: cut = scheme_decision(g); break;
    case LearningScheme::kRelSat: cut = scheme_relsat(g); break;
    case LearningScheme::kFirstNewCut: {
      auto r = scheme_first_new_cut(
          g, [&](const Clause& c) { return known_.contains(c); });
      cut = std::move(r.cut);
      redundant = r.redundant;
      break;
    }
    case LearningScheme::kNone: assert(false); break;
  }
  const Clause learned = cut_to_clause(g, cut);
  redundant = redundant || known_.contains(learned);
  if (cfg_.on_conflict) cfg_.on_conflict(g, cut);

  bump(learned);
  for (NodeId v = 0; v < g.size(); ++v)
    if (cut.conflict_side[v]) bump(g.node(v).reason);
  decay();

  if (cfg_.log_proof) {
    LearnedClauseRecord r;
    r.clause = learned;
    r.conflict_side = conflict_side_literals(g, cut);
    r.derivation = extract_trivial_derivation(g, cut);
    r.scheme = cfg_.learning;
    r.conflict_index = stats_.conflicts;
    r.redundant = redundant;
    proof_.records.push_back(std::move(r));
  }
  if (!redundant) ++stats_.learned_clauses;

  int top = 0;
  std::size_t at_top = 0;
  std::optional<Lit> asserting;
  for (NodeId v : frontier(g, cut)) {
    const int level = g.node(v).level;
    if (level > top) {
      top = level;
      at_top = 0;
    }
    if (level == top) {
      ++at_top;
      asserting = ~g.node(v).lit;
    }
  }
  if (at_top == 1) {
    backjump(learned, *asserting);
    return Step::kContinue;
  }
  // Not asserting: keep the clause, then flip the conflict-level decision
  // with the decision cut's clause as its reason.
  const Cut decisions = scheme_decision(g);
  const Clause reason = cut_to_clause(g, decisions);
  Lit flip;
  for (NodeId v : frontier(g, decisions))
    if (g.node(v).level == g.conflict_level()) flip = ~g.node(v).lit;
  int level = 0;
  for (Lit l : reason)
    if (l != flip) level = std::max(level, prop_.level(l.var()));
  if (cfg_.log_proof && !known_.contains(reason)) {
    LearnedClauseRecord r;
    r.clause = reason;
    r.conflict_side = conflict_side_literals(g, decisions);
    r.derivation = extract_trivial_derivation(g, decisions);
    r.scheme = LearningScheme::kDecision;
    r.conflict_index = stats_.conflicts;
    r.reason_only = true;
    proof_.records.push_back(std::move(r));
  }
  // A re-branched literal keeps its earlier assignment below the conflict
  // level; go under it so the flip can take effect. Level-0 facts stay.
  const int own = prop_.level(flip.var());
  if (own > 0 && own < g.conflict_level()) level = std::min(level, own - 1);
  undo_to(level);
  if (add_learned(learned)) return Step::kContinue;
  if (prop_.value(flip) != Value::kUnassigned) return Step::kContinue;
  for (Lit l : reason)
    if (l != flip && prop_.value(l) != Value::kFalse) return Step::kContinue;
  const auto it = known_.find(reason);
  prop_.imply(flip, it != known_.end() ? it->second
                                       : prop_.add_clause(reason, false));
  return Step::kContinue;
}

Solver::Step Solver::chronological_backtrack(int from_level,
                                             std::optional<Clause> refuted) {
  for (int k = std::min(from_level, prop_.decision_level()); k >= 1; --k) {
    const LevelInfo& info = prop_.level_info(k);
    if (info.flip && refuted) refuted = close_branch(k, *refuted);
    if (info.redecision || info.flip) continue;
    const Lit d = info.decision;
    if (refuted) {
      if (first_branch_.size() <= static_cast<std::size_t>(k))
        first_branch_.resize(k + 1);
      first_branch_[k] = std::move(*refuted);
    }
    undo_to(k - 1);
    prop_.decide(~d, EntryKind::kFlip);
    return Step::kContinue;
  }
  if (refuted) {
    assert(refuted->empty());
    proof_.complete = true;
  }
  return Step::kUnsat;
}

// Both branches of `level` failed: the clause refuting the level above.
Clause Solver::close_branch(int level, const Clause& second) {
  const Var v = prop_.level_info(level).decision.var();
  const Clause& first = first_branch_[level];
  const auto mentions = [v](const Clause& c) {
    return c.contains(Lit::positive(v)) || c.contains(Lit::negative(v));
  };
  if (!mentions(second)) return second;
  if (!mentions(first)) return first;
  TrivialDerivation d;
  d.add_initial(first);
  d.add_initial(second);
  d.add_resolvent(0, 1, v);
  Clause out = d.conclusion();
  log_derived(out, std::move(d), LearningScheme::kNone);
  return out;
}

void Solver::log_derived(Clause c, TrivialDerivation d,
                         LearningScheme scheme) {
  LearnedClauseRecord r;
  r.clause = std::move(c);
  r.derivation = std::move(d);
  r.scheme = scheme;
  r.conflict_index = stats_.conflicts;
  r.reason_only = true;
  proof_.records.push_back(std::move(r));
}

void Solver::backjump(const Clause& learned, Lit asserting) {
  int others = 0;
  for (Lit l : learned)
    if (l != asserting) others = std::max(others, prop_.level(l.var()));
  const int la = prop_.level(asserting.var());
  int target = prop_.decision_level();
  if (prop_.value(asserting) == Value::kFalse) {
    target = std::min(others, la - 1);
  } else if (others < la) {
    target = others;
  }
  undo_to(target);
  add_learned(learned);
}

bool Solver::add_learned(const Clause& learned) {
  ClauseId id;
  if (auto it = known_.find(learned); it != known_.end()) {
    id = it->second;
  } else {
    id = prop_.add_clause(learned);
    known_.emplace(learned, id);
  }
  std::optional<Lit> open;
  int others = 0;
  for (Lit l : learned) {
    const Value v = prop_.value(l);
    if (v == Value::kTrue) return false;
    if (v == Value::kUnassigned) {
      if (open) return false;
      open = l;
    } else {
      others = std::max(others, prop_.level(l.var()));
    }
  }
  if (!open) {
    pending_conflict_ = id;
    return true;
  }
  undo_to(others);
  prop_.imply(*open, id);
  return true;
}

void Solver::undo_to(int level) {
  if (level >= prop_.decision_level()) return;
  const auto& trail = prop_.trail();
  for (std::size_t i = prop_.level_info(level + 1).trail_start;
       i < trail.size(); ++i) {
    heap_insert(trail[i].lit.code());
    heap_insert((~trail[i].lit).code());
  }
  prop_.backtrack(level);
}

void Solver::finish_refutation(const ConflictGraph& g) {
  if (!cfg_.log_proof) return;
  Cut all{std::vector<bool>(g.size(), true)};
  LearnedClauseRecord r;
  r.clause = cut_to_clause(g, all);
  assert(r.clause.empty());
  r.conflict_side = conflict_side_literals(g, all);
  r.derivation = extract_trivial_derivation(g, all);
  r.scheme = cfg_.learning;
  r.conflict_index = stats_.conflicts;
  proof_.records.push_back(std::move(r));
  proof_.complete = true;
}

ClauseId Solver::known_id(const Clause& c) const { return known_.at(c); }

void Solver::bump(const Clause& c) {
  for (Lit l : c) bump(l);
}

void Solver::bump(Lit l) {
  const std::uint32_t code = l.code();
  activity_[code] += activity_inc_;
  if (activity_[code] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    activity_inc_ *= 1e-100;
  }
  if (heap_pos_[code] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[code]));
}

void Solver::decay() { activity_inc_ /= 0.95; }

std::optional<Lit> Solver::pick_fallback() {
  while (!heap_.empty()) {
    const Lit l = Lit::from_code(heap_pop());
    if (prop_.value(l) == Value::kUnassigned) return l;
  }
  return std::nullopt;
}

bool Solver::sequence_satisfies_formula() const {
  for (const Clause& c : formula_.clauses())
    if (std::none_of(c.begin(), c.end(), [&](Lit l) {
          return prop_.value(l) == Value::kTrue;
        }))
      return false;
  return true;
}

PartialAssignment Solver::model() const {
  PartialAssignment m(prop_.num_vars());
  for (std::uint32_t i = 1; i <= prop_.num_vars(); ++i) {
    const Var v(i);
    m.set(v, prop_.value(v) == Value::kTrue ? Value::kTrue : Value::kFalse);
  }
  return m;
}

std::string Solver::check_trail() const {
  const auto& trail = prop_.trail();
  int level = 0;
  for (std::size_t i = 0; i < trail.size(); ++i) {
    const TrailEntry& e = trail[i];
    const Var v = e.lit.var();
    const std::string at = "entry " + std::to_string(i) + " (" +
                           std::to_string(e.lit.to_dimacs()) + ")";
    if (prop_.value(e.lit) != Value::kTrue || prop_.trail_pos(v) != i)
      return at + " disagrees with the assignment";
    if (e.level < level) return at + " decreases the level";
    level = e.level;
    if (e.kind != EntryKind::kImplied) {
      if (e.level < 1 || prop_.level_info(e.level).decision != e.lit ||
          prop_.level_info(e.level).trail_start != i)
        return at + " is not the decision of its level";
      continue;
    }
    if (e.reason == kNoReason) return at + " has no reason";
    const auto reason = prop_.lits(e.reason);
    if (std::find(reason.begin(), reason.end(), e.lit) == reason.end())
      return at + " is missing from its reason";
    int expected = 0;
    for (Lit m : reason) {
      if (m == e.lit) continue;
      if (prop_.value(m) != Value::kFalse || prop_.trail_pos(m.var()) >= i)
        return at + " has a reason literal not false earlier";
      expected = std::max(expected, prop_.level(m.var()));
    }
    if (expected != e.level) return at + " has the wrong level";
  }
  for (ClauseId id = 0; id < prop_.num_clauses(); ++id) {
    if (!prop_.propagates(id) || prop_.is_satisfied(id)) continue;
    std::size_t open = 0;
    for (Lit m : prop_.lits(id))
      if (prop_.value(m) == Value::kUnassigned) ++open;
    if (open < 2)
      return "clause " + prop_.clause(id).to_string() +
             (open == 0 ? " is falsified" : " is unit") + " at a fixpoint";
  }
  return {};
}

// Activity heap over literal codes -------------------------------------------

bool Solver::heap_before(std::uint32_t a, std::uint32_t b) const {
  if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
  // Lower variable first, negative literal before positive.
  const auto rank = [](std::uint32_t c) { return (c & ~1u) | (~c & 1u); };
  return rank(a) < rank(b);
}

void Solver::heap_insert(std::uint32_t code) {
  if (heap_pos_[code] >= 0) return;
  heap_pos_[code] = static_cast<int>(heap_.size());
  heap_.push_back(code);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const std::uint32_t x = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_before(x, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = x;
  heap_pos_[x] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const std::uint32_t x = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_before(heap_[child + 1], heap_[child]))
      ++child;
    if (!heap_before(heap_[child], x)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = x;
  heap_pos_[x] = static_cast<int>(i);
}

std::uint32_t Solver::heap_pop() {
  const std::uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  const std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

}  // namespace clsat
