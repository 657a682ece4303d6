#pragma once

// Finite rooted Kripke frames and models: satisfaction, generated subframes,
// model enumeration, coarsest sigma-bisimulation via partition refinement on
// the disjoint union, and sigma-reduct isomorphism by backtracking search.

#include <functional>
#include <numeric>
#include <optional>

#include "tabint/budget.hpp"
#include "tabint/formula.hpp"

namespace tabint {

using WorldId = std::string;

struct UnknownWorld : std::invalid_argument {
  explicit UnknownWorld(const WorldId& w)
      : std::invalid_argument("unknown world: " + w) {}
};

class PointedFrame {
 public:
  PointedFrame() = default;
  PointedFrame(std::string name, std::vector<WorldId> worlds,
               std::vector<std::pair<WorldId, WorldId>> edges, WorldId root)
      : name_(std::move(name)), worlds_(std::move(worlds)), root_(std::move(root)) {
    for (size_t i = 0; i < worlds_.size(); ++i) {
      if (!index_.emplace(worlds_[i], static_cast<int>(i)).second)
        throw std::invalid_argument("duplicate world: " + worlds_[i]);
    }
    if (!index_.count(root_)) throw UnknownWorld(root_);
    adj_.assign(worlds_.size(), {});
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
      auto ia = index_.find(a);
      auto ib = index_.find(b);
      if (ia == index_.end()) throw UnknownWorld(a);
      if (ib == index_.end()) throw UnknownWorld(b);
      if (seen.emplace(ia->second, ib->second).second)
        adj_[ia->second].push_back(ib->second);
    }
    for (auto& succs : adj_) std::sort(succs.begin(), succs.end());
    edge_set_ = std::move(seen);
    check_rooted();
  }

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  size_t size() const { return worlds_.size(); }
  const std::vector<WorldId>& worlds() const { return worlds_; }
  const WorldId& root() const { return root_; }
  int root_index() const { return index_.at(root_); }

  int index_of(const WorldId& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw UnknownWorld(w);
    return it->second;
  }
  bool has_world(const WorldId& w) const { return index_.count(w) > 0; }
  const std::vector<int>& successors(int world_index) const {
    return adj_.at(world_index);
  }
  bool has_edge(int a, int b) const { return edge_set_.count({a, b}) > 0; }

  std::vector<std::pair<WorldId, WorldId>> edges() const {
    std::vector<std::pair<WorldId, WorldId>> out;
    for (const auto& [a, b] : edge_set_) out.emplace_back(worlds_[a], worlds_[b]);
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const PointedFrame& a, const PointedFrame& b) {
    return a.worlds_ == b.worlds_ && a.root_ == b.root_ && a.edge_set_ == b.edge_set_;
  }

 private:
  void check_rooted() const {
    std::vector<char> seen(worlds_.size(), 0);
    std::vector<int> stack{index_.at(root_)};
    seen[stack[0]] = 1;
    while (!stack.empty()) {
      int w = stack.back();
      stack.pop_back();
      for (int v : adj_[w])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    for (size_t i = 0; i < worlds_.size(); ++i)
      if (!seen[i])
        throw std::invalid_argument("frame not rooted: world " + worlds_[i] +
                                    " unreachable from " + root_);
  }

  std::string name_;
  std::vector<WorldId> worlds_;
  WorldId root_;
  std::map<WorldId, int> index_;
  std::vector<std::vector<int>> adj_;
  std::set<std::pair<int, int>> edge_set_;
};

// Restriction to the worlds reachable from v, rooted at v.
inline PointedFrame generated_subframe(const PointedFrame& fr, const WorldId& v) {
  int start = fr.index_of(v);
  std::vector<char> seen(fr.size(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    for (int u : fr.successors(w))
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  std::vector<WorldId> worlds;
  for (size_t i = 0; i < fr.size(); ++i)
    if (seen[i]) worlds.push_back(fr.worlds()[i]);
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (const auto& [a, b] : fr.edges())
    if (seen[fr.index_of(a)] && seen[fr.index_of(b)]) edges.emplace_back(a, b);
  return PointedFrame(fr.name() + "_" + v, std::move(worlds), std::move(edges), v);
}

class Model {
 public:
  Model(PointedFrame frame, const std::map<WorldId, Signature>& valuation)
      : frame_(std::move(frame)) {
    values_.assign(frame_.size(), {});
    for (const auto& [w, atoms] : valuation) {
      values_.at(frame_.index_of(w)) = atoms;  // throws on unknown world
    }
  }
  Model(PointedFrame frame, std::vector<Signature> values)
      : frame_(std::move(frame)), values_(std::move(values)) {
    if (values_.size() != frame_.size())
      throw std::invalid_argument("valuation size mismatch");
  }

  const PointedFrame& frame() const { return frame_; }
  const Signature& valuation(int world_index) const { return values_.at(world_index); }
  const Signature& valuation(const WorldId& w) const {
    return values_.at(frame_.index_of(w));
  }
  bool holds_atom(int world_index, const Atom& a) const {
    return values_[world_index].count(a) > 0;
  }

  Signature sigma_valuation(int world_index, const Signature& sigma) const {
    Signature out;
    for (const Atom& a : values_[world_index])
      if (sigma.count(a)) out.insert(a);
    return out;
  }

 private:
  PointedFrame frame_;
  std::vector<Signature> values_;
};

// Standard Kripke truth value at world w.
inline bool satisfies(const Model& m, const WorldId& w, Formula f) {
  int target = m.frame().index_of(w);
  auto nodes = collect_nodes(f);
  size_t W = m.frame().size();
  std::unordered_map<const detail::Node*, size_t> pos;
  for (size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
  std::vector<char> val(nodes.size() * W);
  for (size_t i = 0; i < nodes.size(); ++i) {
    const detail::Node* n = nodes[i];
    for (size_t wi = 0; wi < W; ++wi) {
      char v = 1;
      switch (n->kind) {
        case NodeKind::Top: v = 1; break;
        case NodeKind::Atom:
          v = m.holds_atom(static_cast<int>(wi), n->atom);
          break;
        case NodeKind::Not:
          v = !val[pos.at(n->left) * W + wi];
          break;
        case NodeKind::And:
          v = val[pos.at(n->left) * W + wi] && val[pos.at(n->right) * W + wi];
          break;
        case NodeKind::Box: {
          v = 1;
          for (int u : m.frame().successors(static_cast<int>(wi)))
            if (!val[pos.at(n->left) * W + u]) {
              v = 0;
              break;
            }
          break;
        }
      }
      val[i * W + wi] = v;
    }
  }
  return val[pos.at(f.node()) * W + target];
}

// ---------------------------------------------------------------------------
// Model enumeration. Valuation index bit layout is atom-major: bit
// (i*|W| + w) gives the truth of the i-th atom (ascending atom order) at the
// w-th world (frame world order).

class ModelStream {
 public:
  ModelStream(PointedFrame frame, Signature sigma,
              const Budgets& budgets = default_budgets())
      : frame_(std::move(frame)), atoms_(sigma.begin(), sigma.end()) {
    uint64_t bits = static_cast<uint64_t>(atoms_.size()) * frame_.size();
    if (bits > budgets.model_bits)
      throw BudgetExceeded("enumerate_models: |sigma|*|W| = " + std::to_string(bits) +
                           " exceeds budget " + std::to_string(budgets.model_bits));
    total_ = uint64_t{1} << bits;
  }

  uint64_t count() const { return total_; }

  std::optional<Model> next() {
    if (cursor_ >= total_) return std::nullopt;
    return model_at(cursor_++);
  }

  Model model_at(uint64_t index) const {
    std::vector<Signature> values(frame_.size());
    for (size_t i = 0; i < atoms_.size(); ++i)
      for (size_t w = 0; w < frame_.size(); ++w)
        if ((index >> (i * frame_.size() + w)) & 1) values[w].insert(atoms_[i]);
    return Model(frame_, std::move(values));
  }

 private:
  PointedFrame frame_;
  std::vector<Atom> atoms_;
  uint64_t total_ = 0;
  uint64_t cursor_ = 0;
};

template <typename Fn>
void for_each_model(const PointedFrame& frame, const Signature& sigma, Fn&& fn,
                    const Budgets& budgets = default_budgets()) {
  ModelStream stream(frame, sigma, budgets);
  while (auto m = stream.next()) fn(*m);
}

// ---------------------------------------------------------------------------
// Coarsest bisimulation by partition refinement. Nodes carry initial labels;
// two nodes end in the same block iff they are bisimilar in the labeled
// graph. Successor label *sets* drive the refinement.

inline std::vector<int> coarsest_bisim_blocks(const std::vector<std::vector<int>>& adj,
                                              std::vector<int> labels) {
  size_t n = adj.size();
  if (n == 0) return {};
  auto renumber = [&](std::vector<std::pair<int, std::vector<int>>>& keys) {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    std::vector<int> out(n);
    for (size_t i = 0; i < n; ++i) {
      auto it = ids.find(keys[i]);
      if (it == ids.end()) it = ids.emplace(keys[i], static_cast<int>(ids.size())).first;
      out[i] = it->second;
    }
    return out;
  };
  size_t distinct = std::set<int>(labels.begin(), labels.end()).size();
  for (;;) {
    std::vector<std::pair<int, std::vector<int>>> keys(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<int> succ;
      succ.reserve(adj[i].size());
      for (int u : adj[i]) succ.push_back(labels[u]);
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      keys[i] = {labels[i], std::move(succ)};
    }
    std::vector<int> next = renumber(keys);
    size_t next_distinct = std::set<int>(next.begin(), next.end()).size();
    if (next_distinct == distinct) return next;
    labels = std::move(next);
    distinct = next_distinct;
  }
}

using Relation = std::vector<std::pair<WorldId, WorldId>>;

// Coarsest sigma-bisimulation between m1 and m2, computed on the disjoint
// union and intersected with W1 x W2. Absent if the roots are not related.
inline std::optional<Relation> sigma_bisimulation(const Model& m1, const Model& m2,
                                                  const Signature& sigma) {
  size_t n1 = m1.frame().size(), n2 = m2.frame().size();
  std::vector<std::vector<int>> adj(n1 + n2);
  for (size_t w = 0; w < n1; ++w)
    for (int u : m1.frame().successors(static_cast<int>(w))) adj[w].push_back(u);
  for (size_t w = 0; w < n2; ++w)
    for (int u : m2.frame().successors(static_cast<int>(w)))
      adj[n1 + w].push_back(static_cast<int>(n1) + u);

  std::map<Signature, int> label_of;
  std::vector<int> labels(n1 + n2);
  for (size_t w = 0; w < n1; ++w) {
    auto key = m1.sigma_valuation(static_cast<int>(w), sigma);
    labels[w] = label_of.emplace(key, static_cast<int>(label_of.size())).first->second;
  }
  for (size_t w = 0; w < n2; ++w) {
    auto key = m2.sigma_valuation(static_cast<int>(w), sigma);
    labels[n1 + w] =
        label_of.emplace(key, static_cast<int>(label_of.size())).first->second;
  }

  std::vector<int> blocks = coarsest_bisim_blocks(adj, std::move(labels));
  if (blocks[m1.frame().root_index()] != blocks[n1 + m2.frame().root_index()])
    return std::nullopt;
  Relation rel;
  for (size_t w1 = 0; w1 < n1; ++w1)
    for (size_t w2 = 0; w2 < n2; ++w2)
      if (blocks[w1] == blocks[n1 + w2])
        rel.emplace_back(m1.frame().worlds()[w1], m2.frame().worlds()[w2]);
  return rel;
}

inline bool sigma_bisimilar(const Model& m1, const Model& m2, const Signature& sigma) {
  return sigma_bisimulation(m1, m2, sigma).has_value();
}

// ---------------------------------------------------------------------------
// Root-preserving isomorphism of sigma-reducts, by backtracking over world
// matchings.

namespace detail {

inline bool extend_isomorphism(const Model& m1, const Model& m2, const Signature& sigma,
                               std::vector<int>& map12, std::vector<int>& used2,
                               size_t next) {
  size_t n = m1.frame().size();
  if (next == n) return true;
  int w1 = static_cast<int>(next);
  if (map12[w1] >= 0) return extend_isomorphism(m1, m2, sigma, map12, used2, next + 1);
  for (int w2 = 0; w2 < static_cast<int>(n); ++w2) {
    if (used2[w2]) continue;
    if (m1.sigma_valuation(w1, sigma) != m2.sigma_valuation(w2, sigma)) continue;
    bool ok = true;
    for (int v1 = 0; v1 < static_cast<int>(n) && ok; ++v1) {
      if (map12[v1] < 0) continue;
      if (m1.frame().has_edge(w1, v1) != m2.frame().has_edge(w2, map12[v1])) ok = false;
      if (m1.frame().has_edge(v1, w1) != m2.frame().has_edge(map12[v1], w2)) ok = false;
    }
    if (m1.frame().has_edge(w1, w1) != m2.frame().has_edge(w2, w2)) ok = false;
    if (!ok) continue;
    map12[w1] = w2;
    used2[w2] = 1;
    if (extend_isomorphism(m1, m2, sigma, map12, used2, next + 1)) return true;
    map12[w1] = -1;
    used2[w2] = 0;
  }
  return false;
}

}  // namespace detail

inline bool reduct_isomorphic(const Model& m1, const Model& m2, const Signature& sigma) {
  size_t n = m1.frame().size();
  if (n != m2.frame().size()) return false;
  std::vector<int> map12(n, -1);
  std::vector<int> used2(n, 0);
  int r1 = m1.frame().root_index(), r2 = m2.frame().root_index();
  if (m1.sigma_valuation(r1, sigma) != m2.sigma_valuation(r2, sigma)) return false;
  if (m1.frame().has_edge(r1, r1) != m2.frame().has_edge(r2, r2)) return false;
  map12[r1] = r2;
  used2[r2] = 1;
  return detail::extend_isomorphism(m1, m2, sigma, map12, used2, 0);
}

inline bool pointed_frame_isomorphic(const PointedFrame& f1, const PointedFrame& f2) {
  if (f1.size() != f2.size()) return false;
  Model m1(f1, std::vector<Signature>(f1.size()));
  Model m2(f2, std::vector<Signature>(f2.size()));
  return reduct_isomorphic(m1, m2, Signature{});
}

// ---------------------------------------------------------------------------
// Logics: finite nonempty sets of finite rooted pointed frames. For normal
// logics the frame set must be closed under generated subframes up to
// pointed-frame isomorphism.

class Logic {
 public:
  Logic() = default;
  Logic(std::string name, std::vector<PointedFrame> frames, bool normal)
      : name_(std::move(name)), frames_(std::move(frames)), normal_(normal) {
    if (frames_.empty()) throw std::invalid_argument("logic needs at least one frame");
    for (size_t i = 0; i < frames_.size(); ++i)
      if (frames_[i].name().empty()) frames_[i].set_name("f" + std::to_string(i));
    if (normal_) {
      for (const PointedFrame& fr : frames_) {
        for (const WorldId& w : fr.worlds()) {
          PointedFrame sub = generated_subframe(fr, w);
          bool found = false;
          for (const PointedFrame& g : frames_)
            if (pointed_frame_isomorphic(sub, g)) {
              found = true;
              break;
            }
          if (!found)
            throw std::invalid_argument(
                "normal logic not closed under generated subframes: " + fr.name() +
                " at " + w);
        }
      }
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<PointedFrame>& frames() const { return frames_; }
  bool normal() const { return normal_; }

  // N = max frame size.
  unsigned max_frame_size() const {
    size_t n = 0;
    for (const auto& fr : frames_) n = std::max(n, fr.size());
    return static_cast<unsigned>(n);
  }

 private:
  std::string name_;
  std::vector<PointedFrame> frames_;
  bool normal_ = false;
};

}  // namespace tabint
