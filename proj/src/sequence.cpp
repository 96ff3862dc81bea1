#include "clsat/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace clsat {

BranchingSequence::BranchingSequence(std::vector<Lit> lits) {
  entries_.reserve(lits.size());
  for (Lit l : lits) entries_.emplace_back(l);
}

void BranchingSequence::append(const BranchingSequence& other) {
  entries_.insert(entries_.end(), other.entries_.begin(),
                  other.entries_.end());
}

std::size_t BranchingSequence::size() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(),
      [](const SequenceEntry& e) { return std::holds_alternative<Lit>(e); }));
}

std::size_t BranchingSequence::restart_count() const {
  return entries_.size() - size();
}

std::vector<Lit> BranchingSequence::literals() const {
  std::vector<Lit> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_)
    if (const Lit* l = std::get_if<Lit>(&e)) out.push_back(*l);
  return out;
}

BranchingSequence parse_sequence(std::istream& in) {
  BranchingSequence seq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    if (token[0] == '#') continue;
    if (token == "R") {
      seq.push_restart();
      continue;
    }
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value == 0)
      throw ParseError(ParseError::Kind::kToken, line_no,
                       "bad sequence entry '" + std::string(token) + "'");
    seq.push(Lit::from_dimacs(value));
  }
  return seq;
}

BranchingSequence parse_sequence(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sequence(in);
}

void write_sequence(std::ostream& out, const BranchingSequence& seq) {
  for (const auto& e : seq.entries()) {
    if (const Lit* l = std::get_if<Lit>(&e))
      out << l->to_dimacs() << '\n';
    else
      out << "R\n";
  }
}

std::string write_sequence(const BranchingSequence& seq) {
  std::ostringstream out;
  write_sequence(out, seq);
  return out.str();
}

}  // namespace clsat
