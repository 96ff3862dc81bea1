#pragma once

// Branching sequences: literals (branched FALSE first) with optional restart
// markers, plus the line-oriented .seq file format.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clsat/formula.hpp"

namespace clsat {

struct RestartMarker {
  bool operator==(const RestartMarker&) const = default;
};

using SequenceEntry = std::variant<Lit, RestartMarker>;

class BranchingSequence {
 public:
  BranchingSequence() = default;
  explicit BranchingSequence(std::vector<Lit> lits);

  void push(Lit l) { entries_.emplace_back(l); }
  void push_restart() { entries_.emplace_back(RestartMarker{}); }
  void append(const BranchingSequence& other);

  const std::vector<SequenceEntry>& entries() const { return entries_; }
  /// Number of literal entries; restart markers are not counted.
  std::size_t size() const;
  std::size_t restart_count() const;
  bool empty() const { return entries_.empty(); }
  bool has_restarts() const { return restart_count() > 0; }
  /// Literal entries only, in order.
  std::vector<Lit> literals() const;

  bool operator==(const BranchingSequence&) const = default;

 private:
  std::vector<SequenceEntry> entries_;
};

/// One entry per line: a DIMACS literal, or "R" for a restart; lines starting
/// with '#' are comments. Throws ParseError on anything else.
BranchingSequence parse_sequence(std::istream& in);
BranchingSequence parse_sequence(std::string_view text);
void write_sequence(std::ostream& out, const BranchingSequence& seq);
std::string write_sequence(const BranchingSequence& seq);

}  // namespace clsat
