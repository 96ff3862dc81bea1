#include "clsat/gtn.hpp"

#include <stdexcept>

#include "clsat/pebbling.hpp"

namespace clsat {

GtnInstance::GtnInstance(std::uint32_t n) : n_(n) {
  if (n < 3) throw std::invalid_argument("GT_n needs n >= 3");
}

Var GtnInstance::var(std::uint32_t i, std::uint32_t j) const {
  if (i == j || i < 1 || j < 1 || i > n_ || j > n_)
    throw std::invalid_argument("no variable x_{" + std::to_string(i) + "," +
                                std::to_string(j) + "}");
  return Var((i - 1) * (n_ - 1) + (j < i ? j : j - 1));
}

CnfFormula GtnInstance::formula() const {
  CnfFormula f(num_vars(), {});
  auto x = [&](std::uint32_t i, std::uint32_t j) {
    return Lit::positive(var(i, j));
  };
  for (std::uint32_t i = 1; i <= n_; ++i)
    for (std::uint32_t j = i + 1; j <= n_; ++j)
      f.add_clause(Clause({~x(i, j), ~x(j, i)}));
  for (std::uint32_t i = 1; i <= n_; ++i)
    for (std::uint32_t j = 1; j <= n_; ++j)
      for (std::uint32_t k = 1; k <= n_; ++k)
        if (i != j && j != k && i != k)
          f.add_clause(Clause({~x(i, j), ~x(j, k), x(i, k)}));
  for (std::uint32_t j = 1; j <= n_; ++j) {
    std::vector<Lit> lits;
    for (std::uint32_t k = 1; k <= n_; ++k)
      if (k != j) lits.push_back(x(k, j));
    f.add_clause(Clause(std::move(lits)));
  }
  return f;
}

std::vector<std::size_t> GtnInstance::successor_clauses() const {
  const std::size_t first = static_cast<std::size_t>(n_) * (n_ - 1) / 2 +
                            static_cast<std::size_t>(n_) * (n_ - 1) * (n_ - 2);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) out.push_back(first + j);
  return out;
}

CnfFormula gen_gtn(std::uint32_t n) { return GtnInstance(n).formula(); }

CnfFormula gen_gtn_sat(std::uint32_t n, std::uint64_t seed) {
  const GtnInstance inst(n);
  const auto pool = inst.successor_clauses();
  return make_satisfiable(inst.formula(), seed, pool);
}

}  // namespace clsat
