#pragma once

// Propositional core: variables, literals, clauses, CNF formulas, partial
// assignments, restriction, and DIMACS I/O.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clsat {

/// 1-based variable index.
struct Var {
  std::uint32_t index = 0;

  constexpr Var() = default;
  constexpr explicit Var(std::uint32_t i) : index(i) {}
  constexpr auto operator<=>(const Var&) const = default;
};

/// A literal packs (variable, polarity) into one code: 2*(index-1) + negated.
/// Sorting literals by code groups both polarities of a variable together.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated)
      : code_(2 * (v.index - 1) + (negated ? 1u : 0u)) {}

  static constexpr Lit positive(Var v) { return Lit(v, false); }
  static constexpr Lit negative(Var v) { return Lit(v, true); }
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }
  /// DIMACS convention: n > 0 is x_n, n < 0 is its negation.
  static Lit from_dimacs(int value);

  constexpr Var var() const { return Var(code_ / 2 + 1); }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr std::uint32_t code() const { return code_; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  int to_dimacs() const {
    const int v = static_cast<int>(var().index);
    return negated() ? -v : v;
  }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  std::uint32_t code_ = 0;
};

/// Thrown when a clause would contain both l and ~l.
class TautologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A clause is a set of literals kept sorted by code with no duplicates.
/// The empty clause is the contradiction. Tautologies are rejected.
class Clause {
 public:
  Clause() = default;
  /// Sorts and deduplicates; throws TautologyError on complementary literals.
  explicit Clause(std::vector<Lit> lits);
  Clause(std::initializer_list<Lit> lits)
      : Clause(std::vector<Lit>(lits)) {}
  static Clause from_dimacs(std::initializer_list<int> lits);

  const std::vector<Lit>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  bool contains(Lit l) const;
  /// True when every literal of this clause occurs in `other`.
  bool subset_of(const Clause& other) const;

  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause&) const = default;

  std::string to_string() const;

 private:
  std::vector<Lit> lits_;
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const noexcept;
};

/// Resolves `a` and `b` on `pivot`. Returns nullopt when the pivot does not
/// occur with opposite signs or when the result would be tautological.
std::optional<Clause> resolve(const Clause& a, const Clause& b, Var pivot);

class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::uint32_t num_vars, std::vector<Clause> clauses);

  std::uint32_t num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  /// Number of clauses.
  std::size_t size() const { return clauses_.size(); }
  void add_clause(Clause c);
  bool contains_empty_clause() const;

  bool operator==(const CnfFormula&) const = default;

 private:
  std::uint32_t num_vars_ = 0;
  std::vector<Clause> clauses_;
};

enum class Value : std::uint8_t { kFalse = 0, kTrue = 1, kUnassigned = 2 };

inline Value negate(Value v) {
  return v == Value::kUnassigned ? v
                                 : (v == Value::kTrue ? Value::kFalse
                                                      : Value::kTrue);
}

/// Total map from 1..num_vars to {TRUE, FALSE, unassigned}.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::uint32_t num_vars)
      : values_(num_vars, Value::kUnassigned) {}

  std::uint32_t num_vars() const {
    return static_cast<std::uint32_t>(values_.size());
  }
  Value value(Var v) const { return values_.at(v.index - 1); }
  Value value(Lit l) const {
    const Value v = value(l.var());
    return l.negated() ? negate(v) : v;
  }
  void set(Var v, Value value) { values_.at(v.index - 1) = value; }
  /// Makes `l` true.
  void set(Lit l) { set(l.var(), l.negated() ? Value::kFalse : Value::kTrue); }
  bool is_total() const;
  bool satisfies(const Clause& c) const;
  bool satisfies(const CnfFormula& f) const;

  bool operator==(const PartialAssignment&) const = default;

 private:
  std::vector<Value> values_;
};

/// F|rho: clauses with a true literal are dropped, false literals removed.
CnfFormula restrict_simplify(const CnfFormula& f, const PartialAssignment& rho);

// DIMACS ---------------------------------------------------------------------

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kHeader, kLiteralRange, kMissingTerminator, kTautology,
                    kClauseCount, kToken };
  ParseError(Kind kind, std::size_t line, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);
void write_dimacs(std::ostream& out, const CnfFormula& f);
std::string write_dimacs(const CnfFormula& f);

}  // namespace clsat

template <>
struct std::hash<clsat::Clause> : clsat::ClauseHash {};
