#include "clsat/seqgen.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "clsat/gtn.hpp"

namespace clsat {

namespace {

class PebSeq1Uip {
 public:
  explicit PebSeq1Uip(const PebblingGraph& g)
      : g_(g),
        height_(g.heights()),
        preds_(g.size()),
        source_(g.size(), false),
        visited_(g.size(), false),
        visited_as_high_(g.size(), false) {}

  BranchingSequence run() {
    for (NodeIndex v = 0; v < g_.size(); ++v) {
      preds_[v] = g_.node(v).preds;
      std::stable_sort(preds_[v].begin(), preds_[v].end(), lower());
    }
    // Unit-labeled nodes lose their outgoing edges and act as sources.
    std::vector<NodeIndex> units;
    for (NodeIndex v = 0; v < g_.size(); ++v)
      if (g_.node(v).labels.size() == 1) units.push_back(v);
    for (auto& ps : preds_)
      std::erase_if(ps, [&](NodeIndex u) {
        return g_.node(u).labels.size() == 1;
      });
    for (NodeIndex v = 0; v < g_.size(); ++v) source_[v] = preds_[v].empty();
    std::stable_sort(units.begin(), units.end(), lower());

    const auto& targets = g_.targets();
    for (NodeIndex u : units) {
      if (std::find(targets.begin(), targets.end(), u) != targets.end())
        continue;
      out(g_.node(u).labels[0]);
      wrapper(u);
    }
    std::vector<NodeIndex> sorted_targets = targets;
    std::stable_sort(sorted_targets.begin(), sorted_targets.end(), lower());
    for (NodeIndex t : sorted_targets) wrapper(t);
    return std::move(seq_);
  }

 private:
  std::function<bool(NodeIndex, NodeIndex)> lower() const {
    return [this](NodeIndex a, NodeIndex b) {
      if (height_[a] != height_[b]) return height_[a] < height_[b];
      return a > b;
    };
  }

  void out(Var x) { seq_.push(Lit::positive(x)); }

  void wrapper(NodeIndex v) {
    if (!preds_[v].empty()) subseq(v, preds_[v].size());
  }

  void subseq(NodeIndex v, std::size_t i) {
    const NodeIndex u = preds_[v][i - 1];
    if (i == 1) {
      if (!visited_[u] && !source_[u]) {
        visited_[u] = true;
        wrapper(u);
      }
      return;
    }
    const auto& labels = g_.node(u).labels;
    for (std::size_t k = 0; k + 1 < labels.size(); ++k) out(labels[k]);
    if (!visited_as_high_[u] && !source_[u]) {
      visited_as_high_[u] = true;
      out(labels.back());
      if (!visited_[u]) {
        visited_[u] = true;
        wrapper(u);
      }
    }
    subseq(v, i - 1);
    for (std::size_t j = labels.size() >= 2 ? labels.size() - 2 : 0; j >= 1;
         --j) {
      for (std::size_t k = 0; k < j; ++k) out(labels[k]);
      subseq(v, i - 1);
    }
    subseq(v, i - 1);
  }

  const PebblingGraph& g_;
  std::vector<std::uint32_t> height_;
  std::vector<std::vector<NodeIndex>> preds_;
  std::vector<bool> source_;
  std::vector<bool> visited_;
  std::vector<bool> visited_as_high_;
  BranchingSequence seq_;
};

class GridPebSeq1Uip {
 public:
  explicit GridPebSeq1Uip(const PebblingGraph& g)
      : g_(g),
        visited_(g.size(), false),
        visited_as_left_(g.size(), false) {}

  BranchingSequence run() {
    subseq(g_.targets().front());
    return std::move(seq_);
  }

 private:
  void subseq(NodeIndex v) {
    if (g_.is_source(v)) return;
    NodeIndex u = g_.node(v).preds[0];
    seq_.push(Lit::positive(g_.node(u).labels[0]));
    if (!visited_as_left_[u] && !g_.is_source(u)) {
      visited_as_left_[u] = true;
      seq_.push(Lit::positive(g_.node(u).labels[1]));
      if (!visited_[u]) {
        visited_[u] = true;
        subseq(u);
      }
    }
    u = g_.node(v).preds[1];
    if (!visited_[u] && !g_.is_source(u)) {
      visited_[u] = true;
      subseq(u);
    }
  }

  const PebblingGraph& g_;
  std::vector<bool> visited_;
  std::vector<bool> visited_as_left_;
  BranchingSequence seq_;
};

}  // namespace

BranchingSequence peb_seq_1uip(const PebblingGraph& g) {
  g.validate();
  if (g.targets().size() != 1)
    throw std::invalid_argument("sequence generation needs a single target");
  return PebSeq1Uip(g).run();
}

bool is_grid(const PebblingGraph& g) {
  std::uint32_t layers = 0;
  std::size_t count = 0;
  while (count < g.size()) count += ++layers;
  if (count != g.size() || layers == 0) return false;
  const PebblingGraph shape = gen_grid(layers);
  for (NodeIndex v = 0; v < g.size(); ++v)
    if (g.node(v).labels.size() != 2 || g.node(v).preds != shape.node(v).preds)
      return false;
  return g.targets() == shape.targets();
}

BranchingSequence grid_peb_seq_1uip(const PebblingGraph& g) {
  if (!is_grid(g)) throw std::invalid_argument("not a grid pebbling graph");
  g.validate();
  return GridPebSeq1Uip(g).run();
}

BranchingSequence gtn_seq(std::uint32_t n) {
  const GtnInstance inst(n);
  BranchingSequence seq;
  auto column = [&](std::uint32_t j) {
    for (std::uint32_t i = 1; i < n; ++i)
      if (i != j) seq.push(Lit::positive(inst.var(i, j)));
  };
  for (std::uint32_t j = 1; j <= n; ++j) column(j);
  column(n);
  return seq;
}

}  // namespace clsat
