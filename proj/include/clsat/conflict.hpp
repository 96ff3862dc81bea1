#pragma once

// Conflict graphs cut from the implication graph recorded on the trail,
// reason/conflict cuts, the learning schemes that choose them, and the
// trivial resolution derivation behind every cut's clause.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clsat/formula.hpp"
#include "clsat/resolution.hpp"
#include "clsat/trail.hpp"

namespace clsat {

enum class LearningScheme : std::uint8_t {
  kNone,
  kDecision,
  kRelSat,
  kFirstUip,
  kFirstNewCut,
};

std::string to_string(LearningScheme s);
std::optional<LearningScheme> parse_learning_scheme(std::string_view name);

using NodeId = std::uint32_t;

struct ConflictNode {
  Lit lit;
  int level = 0;
  bool decision = false;
  bool to_sink = false;  // conflict literal, has an edge into the sink
  ClauseId reason_id = kNoReason;
  Clause reason;  // empty for decisions
  std::vector<NodeId> preds;
  std::vector<NodeId> succs;
};

/// Nodes are stored in a topological order (trail order, with the nodes
/// created at conflict time last). The sink is implicit: its predecessors
/// are the two nodes with `to_sink` set.
class ConflictGraph {
 public:
  const std::vector<ConflictNode>& nodes() const { return nodes_; }
  const ConflictNode& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  Var conflict_variable() const { return nodes_[conflict_node_].lit.var(); }
  /// The non-decision conflict literal implied latest.
  NodeId conflict_node() const { return conflict_node_; }
  NodeId other_conflict_node() const { return other_conflict_node_; }
  /// Highest level of any node; 0 means no decision is involved.
  int conflict_level() const { return conflict_level_; }
  std::vector<NodeId> sources() const;
  std::optional<NodeId> find(Lit l) const;

  /// Edge list for debugging: "a -> b" lines plus "x -> SINK".
  std::string to_edge_list() const;

 private:
  friend class ConflictGraphBuilder;
  std::vector<ConflictNode> nodes_;
  NodeId conflict_node_ = 0;
  NodeId other_conflict_node_ = 0;
  int conflict_level_ = 0;
};

/// Builds the conflict graph for a clause falsified on the trail: the
/// latest-assigned variable of the clause is the conflict variable, and the
/// backward closure over recorded reasons supplies the rest.
ConflictGraph build_conflict_graph(const Propagator& prop, ClauseId conflicting);

/// Conflict from relaxed branching: `decision` is to be made TRUE at a new
/// level while ~decision is already implied on the trail. Returns nullopt if
/// ~decision is itself a decision (no cut can separate the two).
std::optional<ConflictGraph> build_forced_conflict_graph(const Propagator& prop,
                                                         Lit decision);

/// Conflict side as a node mask; the sink always sits on the conflict side.
struct Cut {
  std::vector<bool> conflict_side;

  bool operator==(const Cut&) const = default;
};

std::vector<NodeId> frontier(const ConflictGraph& g, const Cut& cut);
Clause cut_to_clause(const ConflictGraph& g, const Cut& cut);
/// Decisions on the reason side, a conflict literal on the conflict side,
/// and every conflict-side node reaching the sink inside the conflict side.
bool is_valid_cut(const ConflictGraph& g, const Cut& cut,
                  std::string* why = nullptr);
std::vector<Lit> conflict_side_literals(const ConflictGraph& g, const Cut& cut);

/// Moves every level-0 node feeding the conflict side over to it, so the
/// clause carries no literal fixed at level 0.
Cut absorb_level_zero(const ConflictGraph& g, Cut cut);

/// These three include absorb_level_zero.
Cut scheme_first_uip(const ConflictGraph& g);
Cut scheme_decision(const ConflictGraph& g);
Cut scheme_relsat(const ConflictGraph& g);
/// Repeatedly moves a non-decision frontier node whose predecessors all lie
/// in the frontier over to the conflict side.
Cut minimize_cut(const ConflictGraph& g, Cut cut);

struct FirstNewCutResult {
  Cut cut;
  /// Set when no cut produced an unknown clause; the last one is returned.
  bool redundant = false;
};
FirstNewCutResult scheme_first_new_cut(
    const ConflictGraph& g, const std::function<bool(const Clause&)>& is_known);

/// Resolves the starting conflict literal's antecedent against the antecedent
/// of each other conflict-side node in reverse topological order.
TrivialDerivation extract_trivial_derivation(const ConflictGraph& g,
                                             const Cut& cut);

}  // namespace clsat
