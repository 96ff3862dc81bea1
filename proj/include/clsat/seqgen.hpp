#pragma once

// Branching sequences generated from the problem structure: the 1UIP
// pebbling sequence for general and grid graphs, and the row pattern for
// GT_n.

#include <cstdint>

#include "clsat/pebbling.hpp"
#include "clsat/sequence.hpp"

namespace clsat {

/// Predecessors and unit-labeled nodes are ordered by increasing height;
/// among equal heights the later node comes first (this is what puts a grid
/// node's left predecessor in the "higher" slot). Throws
/// std::invalid_argument unless the graph has exactly one target and no
/// repeated label variables.
BranchingSequence peb_seq_1uip(const PebblingGraph& g);

/// True if `g` has the shape gen_grid produces: pyramid node layout,
/// two-variable labels, apex as the only target.
bool is_grid(const PebblingGraph& g);

/// Single depth-first pass from the apex over left and right predecessors.
/// Throws std::invalid_argument if !is_grid(g).
BranchingSequence grid_peb_seq_1uip(const PebblingGraph& g);

/// Columns j = 1..n of x_{i,j} for i = 1..n-1, i != j, then column n once
/// more; n(n-1) positive literals.
BranchingSequence gtn_seq(std::uint32_t n);

}  // namespace clsat
