#include "clsat/conflict.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace clsat {

std::string to_string(LearningScheme s) {
  switch (s) {
    case LearningScheme::kNone: return "none";
    case LearningScheme::kDecision: return "decision";
    case LearningScheme::kRelSat: return "relsat";
    case LearningScheme::kFirstUip: return "first_uip";
    case LearningScheme::kFirstNewCut: return "first_new_cut";
  }
  return "?";
}

std::optional<LearningScheme> parse_learning_scheme(std::string_view name) {
  for (auto s : {LearningScheme::kNone, LearningScheme::kDecision,
                 LearningScheme::kRelSat, LearningScheme::kFirstUip,
                 LearningScheme::kFirstNewCut})
    if (to_string(s) == name) return s;
  if (name == "1uip") return LearningScheme::kFirstUip;
  if (name == "fnc") return LearningScheme::kFirstNewCut;
  return std::nullopt;
}

std::vector<NodeId> ConflictGraph::sources() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].decision) out.push_back(i);
  return out;
}

std::optional<NodeId> ConflictGraph::find(Lit l) const {
  for (NodeId i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].lit == l) return i;
  return std::nullopt;
}

std::string ConflictGraph::to_edge_list() const {
  std::ostringstream out;
  for (const auto& n : nodes_) {
    for (NodeId p : n.preds)
      out << nodes_[p].lit.to_dimacs() << " -> " << n.lit.to_dimacs() << '\n';
    if (n.to_sink) out << n.lit.to_dimacs() << " -> SINK\n";
  }
  return out.str();
}

// Per-thread var-indexed scratch, cleared by bumping the epoch.
struct BuilderScratch {
  std::vector<std::uint32_t> stamp;
  std::vector<NodeId> id;
  std::uint32_t epoch = 0;
};

class ConflictGraphBuilder {
 public:
  explicit ConflictGraphBuilder(const Propagator& prop)
      : prop_(prop), s_(scratch()) {
    if (++s_.epoch == 0) {
      std::fill(s_.stamp.begin(), s_.stamp.end(), 0);
      s_.epoch = 1;
    }
  }

  /// Adds the backward closure of the given true trail literals.
  void collect(const std::vector<Lit>& seeds) {
    std::vector<Lit> stack(seeds.begin(), seeds.end());
    std::vector<Lit> found;
    while (!stack.empty()) {
      const Lit t = stack.back();
      stack.pop_back();
      if (!mark(t.var())) continue;
      assert(prop_.value(t) == Value::kTrue);
      found.push_back(t);
      if (is_decision(t)) continue;
      for (Lit m : prop_.lits(prop_.reason(t.var())))
        if (m != t) stack.push_back(~m);
    }
    std::sort(found.begin(), found.end(), [&](Lit a, Lit b) {
      return prop_.trail_pos(a.var()) < prop_.trail_pos(b.var());
    });
    g_.nodes_.reserve(g_.nodes_.size() + found.size() + 1);
    for (Lit t : found) {
      ConflictNode node;
      node.lit = t;
      if (is_decision(t)) {
        node.decision = true;
        const auto redecided = prop_.redecision_level(t.var());
        node.level = redecided ? *redecided : prop_.level(t.var());
      } else {
        node.reason_id = prop_.reason(t.var());
        node.reason = prop_.clause(node.reason_id);
        node.preds.reserve(node.reason.size() - 1);
        for (Lit m : node.reason)
          if (m != t) node.preds.push_back(id_of(~m));
      }
      s_.id[t.var().index] = add(std::move(node));
    }
  }

  NodeId add(ConflictNode node) {
    if (!node.decision) {
      node.level = 0;
      for (NodeId p : node.preds)
        node.level = std::max(node.level, g_.nodes_[p].level);
    }
    const auto id = static_cast<NodeId>(g_.nodes_.size());
    g_.nodes_.push_back(std::move(node));
    return id;
  }

  /// Node of a collected trail literal.
  NodeId id_of(Lit l) const {
    assert(s_.stamp[l.var().index] == s_.epoch);
    assert(g_.nodes_[s_.id[l.var().index]].lit == l);
    return s_.id[l.var().index];
  }

  ConflictGraph finish(NodeId a, NodeId b) {
    auto& nodes = g_.nodes_;
    for (NodeId i = 0; i < nodes.size(); ++i)
      for (NodeId p : nodes[i].preds) nodes[p].succs.push_back(i);
    nodes[a].to_sink = true;
    nodes[b].to_sink = true;
    // The starting conflict literal is the later non-decision one.
    NodeId first = std::max(a, b);
    NodeId second = std::min(a, b);
    if (nodes[first].decision) std::swap(first, second);
    g_.conflict_node_ = first;
    g_.other_conflict_node_ = second;
    g_.conflict_level_ = 0;
    for (const auto& n : nodes)
      g_.conflict_level_ = std::max(g_.conflict_level_, n.level);
    return std::move(g_);
  }

 private:
  bool is_decision(Lit t) const {
    if (prop_.redecision_level(t.var())) return true;
    return prop_.trail()[prop_.trail_pos(t.var())].kind != EntryKind::kImplied;
  }

  static BuilderScratch& scratch() {
    thread_local BuilderScratch s;
    return s;
  }

  bool mark(Var v) {
    if (v.index >= s_.stamp.size()) {
      s_.stamp.resize(v.index + 1, 0);
      s_.id.resize(v.index + 1);
    }
    if (s_.stamp[v.index] == s_.epoch) return false;
    s_.stamp[v.index] = s_.epoch;
    return true;
  }

  const Propagator& prop_;
  BuilderScratch& s_;
  ConflictGraph g_;
};

ConflictGraph build_conflict_graph(const Propagator& prop,
                                   ClauseId conflicting) {
  const auto lits = prop.lits(conflicting);
  assert(!lits.empty());
  Lit latest = lits[0];
  for (Lit m : lits) {
    assert(prop.value(m) == Value::kFalse);
    if (prop.trail_pos(m.var()) > prop.trail_pos(latest.var())) latest = m;
  }
  ConflictGraphBuilder b(prop);
  std::vector<Lit> seeds;
  for (Lit m : lits) seeds.push_back(~m);
  b.collect(seeds);
  // The clause would imply `latest`, whose negation is on the trail.
  ConflictNode implied;
  implied.lit = latest;
  implied.reason_id = conflicting;
  implied.reason = prop.clause(conflicting);
  for (Lit m : lits)
    if (m != latest) implied.preds.push_back(b.id_of(~m));
  const NodeId trail_side = b.id_of(~latest);
  const NodeId virtual_side = b.add(std::move(implied));
  return b.finish(trail_side, virtual_side);
}

std::optional<ConflictGraph> build_forced_conflict_graph(const Propagator& prop,
                                                         Lit decision) {
  const Lit implied = ~decision;
  assert(prop.value(implied) == Value::kTrue);
  if (prop.redecision_level(implied.var()) ||
      prop.trail()[prop.trail_pos(implied.var())].kind != EntryKind::kImplied)
    return std::nullopt;
  ConflictGraphBuilder b(prop);
  b.collect({implied});
  ConflictNode forced;
  forced.lit = decision;
  forced.decision = true;
  forced.level = prop.decision_level() + 1;
  const NodeId trail_side = b.id_of(implied);
  const NodeId virtual_side = b.add(std::move(forced));
  return b.finish(trail_side, virtual_side);
}

// Cuts -----------------------------------------------------------------------

namespace {

Cut empty_cut(const ConflictGraph& g) {
  return Cut{std::vector<bool>(g.size(), false)};
}

bool feeds_conflict_side(const ConflictGraph& g, const Cut& cut, NodeId v) {
  const auto& n = g.node(v);
  if (n.to_sink) return true;
  return std::any_of(n.succs.begin(), n.succs.end(),
                     [&](NodeId s) { return cut.conflict_side[s]; });
}

}  // namespace

std::vector<NodeId> frontier(const ConflictGraph& g, const Cut& cut) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.size(); ++v)
    if (!cut.conflict_side[v] && feeds_conflict_side(g, cut, v))
      out.push_back(v);
  return out;
}

Clause cut_to_clause(const ConflictGraph& g, const Cut& cut) {
  std::vector<Lit> lits;
  for (NodeId v : frontier(g, cut)) lits.push_back(~g.node(v).lit);
  return Clause(std::move(lits));
}

bool is_valid_cut(const ConflictGraph& g, const Cut& cut, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (cut.conflict_side.size() != g.size()) return fail("mask size mismatch");
  bool has_conflict_literal = false;
  std::vector<bool> reaches(g.size(), false);
  for (NodeId v = static_cast<NodeId>(g.size()); v-- > 0;) {
    const auto& n = g.node(v);
    if (!cut.conflict_side[v]) continue;
    if (n.decision)
      return fail("decision " + std::to_string(n.lit.to_dimacs()) +
                  " on conflict side");
    if (n.to_sink) has_conflict_literal = true;
    reaches[v] = n.to_sink ||
                 std::any_of(n.succs.begin(), n.succs.end(),
                             [&](NodeId s) { return reaches[s]; });
    if (!reaches[v])
      return fail("node " + std::to_string(n.lit.to_dimacs()) +
                  " does not reach the sink on the conflict side");
  }
  if (!has_conflict_literal) return fail("no conflict literal on conflict side");
  return true;
}

std::vector<Lit> conflict_side_literals(const ConflictGraph& g,
                                        const Cut& cut) {
  std::vector<Lit> out;
  for (NodeId v = 0; v < g.size(); ++v)
    if (cut.conflict_side[v]) out.push_back(g.node(v).lit);
  return out;
}

Cut absorb_level_zero(const ConflictGraph& g, Cut cut) {
  // Level-0 nodes only have level-0 predecessors, so one backward sweep
  // reaches the fixpoint.
  for (NodeId v = static_cast<NodeId>(g.size()); v-- > 0;) {
    const auto& n = g.node(v);
    if (!cut.conflict_side[v] && !n.decision && n.level == 0 &&
        feeds_conflict_side(g, cut, v))
      cut.conflict_side[v] = true;
  }
  return cut;
}

Cut scheme_first_uip(const ConflictGraph& g) {
  const int level = g.conflict_level();
  Cut cut = empty_cut(g);
  std::vector<bool> marked(g.size(), false);
  std::size_t open = 0;
  auto mark = [&](NodeId v) {
    if (cut.conflict_side[v] || marked[v]) return;
    marked[v] = true;
    if (g.node(v).level == level) ++open;
  };
  const NodeId start = g.conflict_node();
  cut.conflict_side[start] = true;
  for (NodeId p : g.node(start).preds) mark(p);
  mark(g.other_conflict_node());
  for (NodeId v = static_cast<NodeId>(g.size()); v-- > 0 && open > 1;) {
    if (!marked[v] || g.node(v).level != level) continue;
    assert(!g.node(v).decision);
    marked[v] = false;
    --open;
    cut.conflict_side[v] = true;
    for (NodeId p : g.node(v).preds) mark(p);
  }
  return absorb_level_zero(g, std::move(cut));
}

Cut scheme_decision(const ConflictGraph& g) {
  Cut cut = empty_cut(g);
  for (NodeId v = 0; v < g.size(); ++v)
    cut.conflict_side[v] = !g.node(v).decision;
  return cut;
}

Cut scheme_relsat(const ConflictGraph& g) {
  Cut cut = empty_cut(g);
  bool has_conflict_literal = false;
  for (NodeId v = 0; v < g.size(); ++v) {
    const auto& n = g.node(v);
    if (!n.decision && n.level == g.conflict_level()) {
      cut.conflict_side[v] = true;
      has_conflict_literal = has_conflict_literal || n.to_sink;
    }
  }
  if (!has_conflict_literal) cut.conflict_side[g.conflict_node()] = true;
  return absorb_level_zero(g, std::move(cut));
}

Cut minimize_cut(const ConflictGraph& g, Cut cut) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> in_frontier(g.size(), false);
    for (NodeId v : frontier(g, cut)) in_frontier[v] = true;
    for (NodeId v = static_cast<NodeId>(g.size()); v-- > 0;) {
      const auto& n = g.node(v);
      if (!in_frontier[v] || n.decision) continue;
      if (std::all_of(n.preds.begin(), n.preds.end(),
                      [&](NodeId p) { return in_frontier[p]; })) {
        cut.conflict_side[v] = true;
        changed = true;
        break;
      }
    }
  }
  return cut;
}

FirstNewCutResult scheme_first_new_cut(
    const ConflictGraph& g,
    const std::function<bool(const Clause&)>& is_known) {
  Cut cut = empty_cut(g);
  cut.conflict_side[g.conflict_node()] = true;
  for (;;) {
    cut = minimize_cut(g, std::move(cut));
    if (!is_known(cut_to_clause(g, cut))) return {std::move(cut), false};
    auto movable = [&](NodeId p) {
      return !cut.conflict_side[p] && !g.node(p).decision;
    };
    // The sink comes after every node, so its predecessors (the conflict
    // literals) are tried first; then conflict-side nodes latest first.
    std::vector<NodeId> to_move;
    for (NodeId p : {g.conflict_node(), g.other_conflict_node()})
      if (movable(p)) to_move.push_back(p);
    for (NodeId v = static_cast<NodeId>(g.size());
         to_move.empty() && v-- > 0;) {
      if (!cut.conflict_side[v]) continue;
      for (NodeId p : g.node(v).preds)
        if (movable(p)) to_move.push_back(p);
    }
    if (to_move.empty()) return {std::move(cut), true};
    for (NodeId p : to_move) cut.conflict_side[p] = true;
  }
}

TrivialDerivation extract_trivial_derivation(const ConflictGraph& g,
                                             const Cut& cut) {
  NodeId start = g.conflict_node();
  if (!cut.conflict_side[start]) start = g.other_conflict_node();
  assert(cut.conflict_side[start] && !g.node(start).decision);
  TrivialDerivation d;
  std::size_t current = d.add_initial(g.node(start).reason);
  for (NodeId v = static_cast<NodeId>(g.size()); v-- > 0;) {
    if (v == start || !cut.conflict_side[v]) continue;
    const std::size_t antecedent = d.add_initial(g.node(v).reason);
    current = d.add_resolvent(current, antecedent, g.node(v).lit.var());
  }
  assert(d.conclusion() == cut_to_clause(g, cut));
  return d;
}

}  // namespace clsat
