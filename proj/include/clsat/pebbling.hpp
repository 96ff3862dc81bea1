#pragma once

// Pebbling graphs (grid and randomized), their CNF encoding, and the
// one-clause deletion that makes an encoding satisfiable.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clsat/formula.hpp"

namespace clsat {

using NodeIndex = std::uint32_t;

struct PebblingNode {
  std::vector<Var> labels;
  std::vector<NodeIndex> preds;

  bool operator==(const PebblingNode&) const = default;
};

/// Node ids are topological: every predecessor has a smaller id.
class PebblingGraph {
 public:
  /// Throws std::invalid_argument on an empty label or a predecessor that
  /// is not an earlier node.
  NodeIndex add_node(std::vector<Var> labels, std::vector<NodeIndex> preds);
  void add_target(NodeIndex id);

  const std::vector<PebblingNode>& nodes() const { return nodes_; }
  const PebblingNode& node(NodeIndex id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodeIndex>& targets() const { return targets_; }
  bool is_source(NodeIndex id) const { return nodes_[id].preds.empty(); }
  /// Largest label variable index.
  std::uint32_t num_vars() const;
  /// 1 for sources, otherwise 1 + the largest predecessor height.
  std::vector<std::uint32_t> heights() const;
  std::vector<std::vector<NodeIndex>> successors() const;

  /// Throws std::invalid_argument if a variable labels two places, a
  /// predecessor repeats, or there are no targets.
  void validate() const;

  bool operator==(const PebblingGraph&) const = default;

 private:
  std::vector<PebblingNode> nodes_;
  std::vector<NodeIndex> targets_;
};

/// Pyramid with `layers` nodes at the bottom and one at the apex. Nodes are
/// numbered bottom layer first, left to right; node k is labeled with
/// variables 2k+1 and 2k+2. Node (r, i) has predecessors (r-1, i) on the
/// left and (r-1, i+1) on the right.
PebblingGraph gen_grid(std::uint32_t layers);

/// Random DAG: node k draws its indegree uniformly from
/// [2, min(max_indegree, k)] (source if that range is empty), its
/// predecessors uniformly among earlier nodes, and its label size uniformly
/// from [1, max_label]. All sinks are then joined pairwise under fresh
/// two-variable cap nodes until a single target remains.
PebblingGraph gen_random_pebbling(std::uint32_t nodes,
                                  std::uint32_t max_indegree,
                                  std::uint32_t max_label, std::uint64_t seed);

/// Node order: a source clause or all precedence clauses per node (last
/// predecessor's label varying fastest); target unit clauses last.
CnfFormula pebbling_to_cnf(const PebblingGraph& g);

/// Index of the clause removed by make_satisfiable; drawn from `pool` if it
/// is nonempty, otherwise from all clauses.
std::size_t choose_deleted_clause(const CnfFormula& f, std::uint64_t seed,
                                  std::span<const std::size_t> pool = {});
CnfFormula make_satisfiable(const CnfFormula& f, std::uint64_t seed,
                            std::span<const std::size_t> pool = {});

/// "p peb N", then "n <id> <label vars> | <pred ids>" per node, then
/// "t <id>" per target. Ids are 0-based.
void write_pebbling(std::ostream& out, const PebblingGraph& g);
std::string write_pebbling(const PebblingGraph& g);
PebblingGraph parse_pebbling(std::istream& in);
PebblingGraph parse_pebbling(std::string_view text);

}  // namespace clsat
