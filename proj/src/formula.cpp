#include "clsat/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace clsat {

Lit Lit::from_dimacs(int value) {
  if (value == 0) throw std::invalid_argument("literal 0 is not a literal");
  const auto index = static_cast<std::uint32_t>(std::abs(value));
  return Lit(Var(index), value < 0);
}

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  // Complementary literals are adjacent after sorting by code.
  for (std::size_t i = 1; i < lits_.size(); ++i) {
    if (lits_[i].var() == lits_[i - 1].var())
      throw TautologyError("tautological clause on variable " +
                           std::to_string(lits_[i].var().index));
  }
}

Clause Clause::from_dimacs(std::initializer_list<int> lits) {
  std::vector<Lit> out;
  out.reserve(lits.size());
  for (int v : lits) out.push_back(Lit::from_dimacs(v));
  return Clause(std::move(out));
}

bool Clause::contains(Lit l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::subset_of(const Clause& other) const {
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(),
                       lits_.end());
}

std::string Clause::to_string() const {
  if (lits_.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < lits_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(lits_[i].to_dimacs());
  }
  return s + ")";
}

std::size_t ClauseHash::operator()(const Clause& c) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ c.size();
  for (Lit l : c) {
    h ^= l.code() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::optional<Clause> resolve(const Clause& a, const Clause& b, Var pivot) {
  const Lit pos = Lit::positive(pivot);
  const Lit neg = Lit::negative(pivot);
  const bool a_pos = a.contains(pos);
  const bool a_neg = a.contains(neg);
  const bool b_pos = b.contains(pos);
  const bool b_neg = b.contains(neg);
  if (!((a_pos && b_neg) || (a_neg && b_pos))) return std::nullopt;
  std::vector<Lit> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(),
             std::back_inserter(merged));
  std::erase_if(merged, [&](Lit l) { return l.var() == pivot; });
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  for (std::size_t i = 1; i < merged.size(); ++i)
    if (merged[i].var() == merged[i - 1].var()) return std::nullopt;
  return Clause(std::move(merged));
}

CnfFormula::CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars) {
  clauses_.reserve(clauses.size());
  for (auto& c : clauses) add_clause(std::move(c));
}

void CnfFormula::add_clause(Clause c) {
  for (Lit l : c)
    if (l.var().index > num_vars_)
      throw std::invalid_argument("literal " + std::to_string(l.to_dimacs()) +
                                  " exceeds num_vars " +
                                  std::to_string(num_vars_));
  clauses_.push_back(std::move(c));
}

bool CnfFormula::contains_empty_clause() const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.empty(); });
}

bool PartialAssignment::is_total() const {
  return std::none_of(values_.begin(), values_.end(),
                      [](Value v) { return v == Value::kUnassigned; });
}

bool PartialAssignment::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(),
                     [&](Lit l) { return value(l) == Value::kTrue; });
}

bool PartialAssignment::satisfies(const CnfFormula& f) const {
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [&](const Clause& c) { return satisfies(c); });
}

CnfFormula restrict_simplify(const CnfFormula& f,
                             const PartialAssignment& rho) {
  CnfFormula out(f.num_vars(), {});
  for (const Clause& c : f.clauses()) {
    if (rho.satisfies(c)) continue;
    std::vector<Lit> kept;
    for (Lit l : c)
      if (rho.value(l) == Value::kUnassigned) kept.push_back(l);
    out.add_clause(Clause(std::move(kept)));
  }
  return out;
}

// DIMACS ---------------------------------------------------------------------

ParseError::ParseError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      kind_(kind),
      line_(line) {}

namespace {

bool parse_int(std::string_view token, long long& out) {
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  using Kind = ParseError::Kind;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  long long num_vars = 0;
  long long num_clauses = 0;
  CnfFormula f;
  std::vector<Lit> pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    view.remove_prefix(first);
    if (view[0] == 'c' || view[0] == '%') continue;
    if (view[0] == 'p') {
      if (have_header) throw ParseError(Kind::kHeader, line_no, "duplicate header");
      std::istringstream hs{std::string(view)};
      std::string p, fmt, extra;
      if (!(hs >> p >> fmt >> num_vars >> num_clauses) || p != "p" ||
          fmt != "cnf" || num_vars < 0 || num_clauses < 0 || (hs >> extra))
        throw ParseError(Kind::kHeader, line_no, "malformed header");
      have_header = true;
      f = CnfFormula(static_cast<std::uint32_t>(num_vars), {});
      continue;
    }
    if (!have_header)
      throw ParseError(Kind::kHeader, line_no, "clause before header");
    std::istringstream ls{std::string(view)};
    std::string token;
    while (ls >> token) {
      long long value = 0;
      if (!parse_int(token, value))
        throw ParseError(Kind::kToken, line_no, "bad token '" + token + "'");
      if (value == 0) {
        try {
          f.add_clause(Clause(std::move(pending)));
        } catch (const TautologyError&) {
          throw ParseError(Kind::kTautology, line_no, "tautological clause");
        }
        pending.clear();
        continue;
      }
      if (std::llabs(value) > num_vars)
        throw ParseError(Kind::kLiteralRange, line_no,
                         "literal " + token + " exceeds variable count");
      if (pending.empty()) pending_line = line_no;
      pending.push_back(Lit::from_dimacs(static_cast<int>(value)));
    }
  }
  if (!have_header) throw ParseError(Kind::kHeader, line_no, "missing header");
  if (!pending.empty())
    throw ParseError(Kind::kMissingTerminator, pending_line,
                     "clause not terminated by 0");
  if (static_cast<long long>(f.size()) != num_clauses)
    throw ParseError(Kind::kClauseCount, line_no,
                     "header declares " + std::to_string(num_clauses) +
                         " clauses, found " + std::to_string(f.size()));
  return f;
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.num_vars() << ' ' << f.size() << '\n';
  for (const Clause& c : f.clauses()) {
    for (Lit l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  write_dimacs(out, f);
  return out.str();
}

}  // namespace clsat
