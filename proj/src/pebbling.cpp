#include "clsat/pebbling.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace clsat {

NodeIndex PebblingGraph::add_node(std::vector<Var> labels,
                                  std::vector<NodeIndex> preds) {
  if (labels.empty()) throw std::invalid_argument("node without a label");
  const auto id = static_cast<NodeIndex>(nodes_.size());
  for (NodeIndex p : preds)
    if (p >= id)
      throw std::invalid_argument("predecessor " + std::to_string(p) +
                                  " of node " + std::to_string(id) +
                                  " is not an earlier node");
  nodes_.push_back(PebblingNode{std::move(labels), std::move(preds)});
  return id;
}

void PebblingGraph::add_target(NodeIndex id) {
  if (id >= nodes_.size())
    throw std::invalid_argument("target " + std::to_string(id) +
                                " does not exist");
  if (std::find(targets_.begin(), targets_.end(), id) == targets_.end())
    targets_.push_back(id);
}

std::uint32_t PebblingGraph::num_vars() const {
  std::uint32_t n = 0;
  for (const auto& node : nodes_)
    for (Var v : node.labels) n = std::max(n, v.index);
  return n;
}

std::vector<std::uint32_t> PebblingGraph::heights() const {
  std::vector<std::uint32_t> h(nodes_.size(), 1);
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    for (NodeIndex p : nodes_[v].preds) h[v] = std::max(h[v], h[p] + 1);
  return h;
}

std::vector<std::vector<NodeIndex>> PebblingGraph::successors() const {
  std::vector<std::vector<NodeIndex>> out(nodes_.size());
  for (NodeIndex v = 0; v < nodes_.size(); ++v)
    for (NodeIndex p : nodes_[v].preds) out[p].push_back(v);
  return out;
}

void PebblingGraph::validate() const {
  std::vector<bool> seen(num_vars() + 1);
  std::vector<NodeIndex> preds;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    for (Var x : nodes_[v].labels) {
      if (x.index == 0 || seen[x.index])
        throw std::invalid_argument("variable " + std::to_string(x.index) +
                                    " labels more than one place");
      seen[x.index] = true;
    }
    preds = nodes_[v].preds;
    std::sort(preds.begin(), preds.end());
    if (std::adjacent_find(preds.begin(), preds.end()) != preds.end())
      throw std::invalid_argument("node " + std::to_string(v) +
                                  " repeats a predecessor");
  }
  if (targets_.empty()) throw std::invalid_argument("graph has no target");
}

PebblingGraph gen_grid(std::uint32_t layers) {
  if (layers == 0) throw std::invalid_argument("grid needs at least 1 layer");
  PebblingGraph g;
  NodeIndex row_start = 0;
  for (std::uint32_t r = 0; r < layers; ++r) {
    const std::uint32_t width = layers - r;
    const NodeIndex below = r == 0 ? 0 : row_start - (width + 1);
    for (std::uint32_t i = 0; i < width; ++i) {
      const NodeIndex id = row_start + i;
      std::vector<Var> labels{Var(2 * id + 1), Var(2 * id + 2)};
      std::vector<NodeIndex> preds;
      if (r > 0) preds = {below + i, below + i + 1};
      g.add_node(std::move(labels), std::move(preds));
    }
    row_start += width;
  }
  g.add_target(row_start - 1);
  return g;
}

PebblingGraph gen_random_pebbling(std::uint32_t nodes,
                                  std::uint32_t max_indegree,
                                  std::uint32_t max_label,
                                  std::uint64_t seed) {
  if (nodes == 0 || max_indegree == 0 || max_label == 0)
    throw std::invalid_argument("random pebbling bounds must be positive");
  std::mt19937_64 rng(seed);
  PebblingGraph g;
  std::uint32_t next_var = 1;
  auto fresh = [&](std::uint32_t count) {
    std::vector<Var> labels;
    for (std::uint32_t k = 0; k < count; ++k) labels.emplace_back(next_var++);
    return labels;
  };
  for (NodeIndex k = 0; k < nodes; ++k) {
    const auto size = std::uniform_int_distribution<std::uint32_t>(
        1, max_label)(rng);
    const std::uint32_t hi = std::min<std::uint32_t>(max_indegree, k);
    std::vector<NodeIndex> preds;
    if (hi >= 2) {
      const auto degree =
          std::uniform_int_distribution<std::uint32_t>(2, hi)(rng);
      // Partial Fisher-Yates over the earlier nodes.
      std::vector<NodeIndex> pool(k);
      for (NodeIndex p = 0; p < k; ++p) pool[p] = p;
      for (std::uint32_t s = 0; s < degree; ++s) {
        const auto pick =
            std::uniform_int_distribution<std::uint32_t>(s, k - 1)(rng);
        std::swap(pool[s], pool[pick]);
        preds.push_back(pool[s]);
      }
      std::sort(preds.begin(), preds.end());
    }
    g.add_node(fresh(size), std::move(preds));
  }
  const auto succs = g.successors();
  std::deque<NodeIndex> open;
  for (NodeIndex v = 0; v < g.size(); ++v)
    if (succs[v].empty()) open.push_back(v);
  while (open.size() > 1) {
    const NodeIndex a = open.front();
    open.pop_front();
    const NodeIndex b = open.front();
    open.pop_front();
    open.push_back(g.add_node(fresh(2), {std::min(a, b), std::max(a, b)}));
  }
  g.add_target(open.front());
  return g;
}

CnfFormula pebbling_to_cnf(const PebblingGraph& g) {
  g.validate();
  CnfFormula f(g.num_vars(), {});
  for (const auto& node : g.nodes()) {
    std::vector<Lit> own;
    for (Var x : node.labels) own.push_back(Lit::positive(x));
    if (node.preds.empty()) {
      f.add_clause(Clause(own));
      continue;
    }
    std::vector<std::size_t> choice(node.preds.size(), 0);
    for (;;) {
      std::vector<Lit> lits;
      lits.reserve(own.size() + choice.size());
      lits.insert(lits.end(), own.begin(), own.end());
      for (std::size_t i = 0; i < choice.size(); ++i)
        lits.push_back(
            Lit::negative(g.node(node.preds[i]).labels[choice[i]]));
      f.add_clause(Clause(std::move(lits)));
      std::size_t i = choice.size();
      for (; i > 0; --i) {
        if (++choice[i - 1] < g.node(node.preds[i - 1]).labels.size()) break;
        choice[i - 1] = 0;
      }
      if (i == 0) break;
    }
  }
  for (NodeIndex t : g.targets())
    for (Var x : g.node(t).labels) f.add_clause(Clause({Lit::negative(x)}));
  return f;
}

std::size_t choose_deleted_clause(const CnfFormula& f, std::uint64_t seed,
                                  std::span<const std::size_t> pool) {
  if (f.size() == 0) throw std::invalid_argument("no clause to delete");
  std::mt19937_64 rng(seed);
  if (pool.empty())
    return std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng);
  return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(
      rng)];
}

CnfFormula make_satisfiable(const CnfFormula& f, std::uint64_t seed,
                            std::span<const std::size_t> pool) {
  const std::size_t drop = choose_deleted_clause(f, seed, pool);
  std::vector<Clause> kept;
  kept.reserve(f.size() - 1);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (i != drop) kept.push_back(f.clauses()[i]);
  return CnfFormula(f.num_vars(), std::move(kept));
}

void write_pebbling(std::ostream& out, const PebblingGraph& g) {
  out << "p peb " << g.size() << '\n';
  for (NodeIndex v = 0; v < g.size(); ++v) {
    out << "n " << v;
    for (Var x : g.node(v).labels) out << ' ' << x.index;
    out << " |";
    for (NodeIndex p : g.node(v).preds) out << ' ' << p;
    out << '\n';
  }
  for (NodeIndex t : g.targets()) out << "t " << t << '\n';
}

std::string write_pebbling(const PebblingGraph& g) {
  std::ostringstream out;
  write_pebbling(out, g);
  return out.str();
}

PebblingGraph parse_pebbling(std::istream& in) {
  using Kind = ParseError::Kind;
  PebblingGraph g;
  std::string line;
  std::size_t line_no = 0;
  long long declared = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == 'c' || tag[0] == '#') continue;
    try {
      if (tag == "p") {
        std::string kind;
        if (declared >= 0 || !(ls >> kind >> declared) || kind != "peb" ||
            declared < 0)
          throw ParseError(Kind::kHeader, line_no, "bad pebbling header");
      } else if (tag == "n") {
        if (declared < 0)
          throw ParseError(Kind::kHeader, line_no, "node before header");
        long long id = -1;
        if (!(ls >> id) || id != static_cast<long long>(g.size()))
          throw ParseError(Kind::kToken, line_no, "node ids must be 0, 1, ...");
        std::vector<Var> labels;
        std::vector<NodeIndex> preds;
        std::string tok;
        bool after_bar = false;
        while (ls >> tok) {
          if (tok == "|") {
            after_bar = true;
            continue;
          }
          std::size_t used = 0;
          const long long v = std::stoll(tok, &used);
          if (used != tok.size() || v < (after_bar ? 0 : 1))
            throw ParseError(Kind::kToken, line_no, "bad token '" + tok + "'");
          if (after_bar)
            preds.push_back(static_cast<NodeIndex>(v));
          else
            labels.emplace_back(static_cast<std::uint32_t>(v));
        }
        if (!after_bar)
          throw ParseError(Kind::kToken, line_no, "missing '|' separator");
        g.add_node(std::move(labels), std::move(preds));
      } else if (tag == "t") {
        long long id = -1;
        if (!(ls >> id) || id < 0)
          throw ParseError(Kind::kToken, line_no, "bad target line");
        g.add_target(static_cast<NodeIndex>(id));
      } else {
        throw ParseError(Kind::kToken, line_no, "unknown tag '" + tag + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(Kind::kToken, line_no, e.what());
    } catch (const std::out_of_range& e) {
      throw ParseError(Kind::kToken, line_no, e.what());
    }
  }
  if (declared < 0) throw ParseError(Kind::kHeader, line_no, "missing header");
  if (static_cast<long long>(g.size()) != declared)
    throw ParseError(Kind::kClauseCount, line_no,
                     "header declares " + std::to_string(declared) +
                         " nodes, found " + std::to_string(g.size()));
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(Kind::kToken, line_no, e.what());
  }
  return g;
}

PebblingGraph parse_pebbling(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pebbling(in);
}

}  // namespace clsat
