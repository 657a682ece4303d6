#pragma once

// sigma-EMEs, sigma-covers and cover families, abstract Phi-models, abstract
// bisimulation, abstract class identifiers, and sigma-encodings. Cover
// families are enumerated as labeled refinement trees; identifiers come from
// partition refinement over the abstract model with a fixed scan order.

#include "tabint/kripke.hpp"
#include "tabint/prop.hpp"

namespace tabint {

// Exhaustive and mutually exclusive set of propositional formulas over sigma.
struct EME {
  Signature sigma;
  std::vector<Formula> members;

  friend bool operator==(const EME& a, const EME& b) {
    return a.sigma == b.sigma && a.members == b.members;
  }
  friend bool operator!=(const EME& a, const EME& b) { return !(a == b); }
};

// (i) the disjunction of members is a tautology, (ii) distinct members are
// pairwise inconsistent.
inline bool eme_valid(const EME& phi, const Budgets& budgets = default_budgets()) {
  for (Formula m : phi.members) {
    for (const Atom& a : signature_of(m))
      if (!phi.sigma.count(a)) return false;
  }
  if (!is_tautology(Formula::disj_all(phi.members), budgets)) return false;
  for (size_t i = 0; i < phi.members.size(); ++i)
    for (size_t j = i + 1; j < phi.members.size(); ++j)
      if (is_satisfiable(Formula::conj(phi.members[i], phi.members[j]), budgets))
        return false;
  return true;
}

namespace detail {

inline Valuation world_valuation(const Model& m, int widx, const Signature& sigma) {
  Valuation v;
  for (const Atom& a : sigma) v[a] = m.holds_atom(widx, a);
  return v;
}

}  // namespace detail

// Index of the unique member satisfied at world widx.
inline int member_at(const EME& phi, const Model& m, int widx) {
  Valuation v = detail::world_valuation(m, widx, phi.sigma);
  for (size_t i = 0; i < phi.members.size(); ++i)
    if (eval_prop(phi.members[i], v)) return static_cast<int>(i);
  throw std::invalid_argument("EME is not exhaustive at world " +
                              m.frame().worlds()[widx]);
}

// Phi covers m iff any two worlds satisfying the same member have the same
// sigma-valuation.
inline bool is_cover(const EME& phi, const Model& m) {
  std::map<int, Signature> seen;
  for (size_t w = 0; w < m.frame().size(); ++w) {
    int mi = member_at(phi, m, static_cast<int>(w));
    Signature sv = m.sigma_valuation(static_cast<int>(w), phi.sigma);
    auto it = seen.find(mi);
    if (it == seen.end())
      seen.emplace(mi, std::move(sv));
    else if (it->second != sv)
      return false;
  }
  return true;
}

// cover(sigma, Phi) = /\_{phi in Phi} /\_{p in sigma}
//                     (<>^{<=N}(phi & p) -> []^{<=N}(phi -> p)).
inline Formula cover_formula(const Signature& sigma, const EME& phi, unsigned N) {
  std::vector<Formula> parts;
  for (Formula m : phi.members)
    for (const Atom& a : sigma) {
      Formula p = Formula::atom(a);
      parts.push_back(Formula::implies(diamond_upto(Formula::conj(m, p), N),
                                       box_upto(Formula::implies(m, p), N)));
    }
  return Formula::conj_all(parts);
}

// Refinement cover of a single model: start from {true}, split a member on an
// atom while both halves are realized. First splittable (member, atom) pair in
// scan order wins, so the result is deterministic.
inline EME compute_cover(const Model& m, const Signature& sigma) {
  std::vector<Formula> members{Formula::top()};
  auto realized = [&](Formula f) {
    for (size_t w = 0; w < m.frame().size(); ++w)
      if (eval_prop(f, detail::world_valuation(m, static_cast<int>(w), sigma)))
        return true;
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < members.size() && !changed; ++i) {
      for (const Atom& a : sigma) {
        Formula pos = Formula::conj(members[i], Formula::atom(a));
        Formula neg = Formula::conj(members[i], Formula::negation(Formula::atom(a)));
        if (realized(pos) && realized(neg)) {
          members[i] = pos;
          members.insert(members.begin() + static_cast<long>(i) + 1, neg);
          changed = true;
          break;
        }
      }
    }
  }
  return EME{sigma, std::move(members)};
}

// ---------------------------------------------------------------------------
// Cover families: all refinement outcomes with at most |W| leaves,
// represented as binary split trees whose paths use each atom at most once.
// Deduplication is by the members' truth tables over sigma.

namespace detail {

struct EmeKey {
  std::vector<std::vector<uint64_t>> tables;  // sorted truth tables
  friend bool operator<(const EmeKey& a, const EmeKey& b) { return a.tables < b.tables; }
};

inline std::vector<uint64_t> truth_table(Formula f, const std::vector<Atom>& atoms) {
  uint64_t total = uint64_t{1} << atoms.size();
  std::vector<uint64_t> words((total + 63) / 64, 0);
  Valuation v;
  for (uint64_t idx = 0; idx < total; ++idx) {
    for (size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (idx >> i) & 1;
    if (eval_prop(f, v)) words[idx / 64] |= uint64_t{1} << (idx % 64);
  }
  return words;
}

inline void gen_cover_trees(const std::vector<Atom>& sigma, std::set<size_t> used,
                            Formula prefix, int exact_leaves,
                            std::vector<Formula>& current,
                            const std::function<void()>& emit, uint64_t& steps,
                            uint64_t step_budget) {
  if (++steps > step_budget)
    throw BudgetExceeded("enumerate_cover_family: tree budget exceeded");
  if (exact_leaves == 1) {
    current.push_back(prefix);
    emit();
    current.pop_back();
    return;
  }
  for (size_t ai = 0; ai < sigma.size(); ++ai) {
    if (used.count(ai)) continue;
    std::set<size_t> used2 = used;
    used2.insert(ai);
    Formula atom = Formula::atom(sigma[ai]);
    for (int left = 1; left < exact_leaves; ++left) {
      int right = exact_leaves - left;
      gen_cover_trees(
          sigma, used2, Formula::conj(prefix, atom), left, current,
          [&]() {
            gen_cover_trees(sigma, used2,
                            Formula::conj(prefix, Formula::negation(atom)), right,
                            current, emit, steps, step_budget);
          },
          steps, step_budget);
    }
  }
}

}  // namespace detail

// Gamma_F: every model based on fr has a cover in the result; members are
// literal conjunctions with at most |W| members per EME.
inline std::vector<EME> enumerate_cover_family(const PointedFrame& fr,
                                               const Signature& sigma,
                                               const Budgets& budgets = default_budgets()) {
  std::vector<Atom> atoms(sigma.begin(), sigma.end());
  if (atoms.size() > 16)
    throw BudgetExceeded("enumerate_cover_family: signature too large");
  int max_leaves = static_cast<int>(fr.size());
  std::map<detail::EmeKey, EME> dedup;
  uint64_t steps = 0;
  for (int k = 1; k <= max_leaves; ++k) {
    std::vector<Formula> current;
    auto emit = [&]() {
      detail::EmeKey key;
      for (Formula m : current) key.tables.push_back(detail::truth_table(m, atoms));
      std::sort(key.tables.begin(), key.tables.end());
      if (!dedup.count(key)) dedup.emplace(std::move(key), EME{sigma, current});
    };
    detail::gen_cover_trees(atoms, {}, Formula::top(), k, current, emit, steps,
                            budgets.cover_trees);
  }
  std::vector<EME> out;
  out.reserve(dedup.size());
  for (auto& [key, eme] : dedup) out.push_back(std::move(eme));
  return out;
}

// ---------------------------------------------------------------------------
// Abstract Phi-models.

struct AbstractModel {
  PointedFrame frame;
  EME phi;
  std::vector<int> labels;  // member index per world

  Formula label_formula(int widx) const { return phi.members.at(labels.at(widx)); }
};

inline AbstractModel abstraction_of(const Model& m, const EME& phi) {
  if (!is_cover(phi, m))
    throw std::invalid_argument("abstraction_of: Phi is not a cover of the model");
  std::vector<int> labels(m.frame().size());
  for (size_t w = 0; w < m.frame().size(); ++w)
    labels[w] = member_at(phi, m, static_cast<int>(w));
  return AbstractModel{m.frame(), phi, std::move(labels)};
}

// Coarsest abstract Phi-bisimulation relating the roots, if any.
inline std::optional<Relation> abstract_bisimilar(const AbstractModel& a1,
                                                  const AbstractModel& a2) {
  if (a1.phi != a2.phi)
    throw std::invalid_argument("abstract_bisimilar: EME mismatch");
  size_t n1 = a1.frame.size(), n2 = a2.frame.size();
  std::vector<std::vector<int>> adj(n1 + n2);
  for (size_t w = 0; w < n1; ++w)
    for (int u : a1.frame.successors(static_cast<int>(w))) adj[w].push_back(u);
  for (size_t w = 0; w < n2; ++w)
    for (int u : a2.frame.successors(static_cast<int>(w)))
      adj[n1 + w].push_back(static_cast<int>(n1) + u);
  std::vector<int> labels(n1 + n2);
  for (size_t w = 0; w < n1; ++w) labels[w] = a1.labels[w];
  for (size_t w = 0; w < n2; ++w) labels[n1 + w] = a2.labels[w];
  std::vector<int> blocks = coarsest_bisim_blocks(adj, std::move(labels));
  if (blocks[a1.frame.root_index()] != blocks[n1 + a2.frame.root_index()])
    return std::nullopt;
  Relation rel;
  for (size_t w1 = 0; w1 < n1; ++w1)
    for (size_t w2 = 0; w2 < n2; ++w2)
      if (blocks[w1] == blocks[n1 + w2])
        rel.emplace_back(a1.frame.worlds()[w1], a2.frame.worlds()[w2]);
  return rel;
}

// Evaluation of ML(Phi) formulas: member subterms act as atoms tested against
// the labeling; any other atom is rejected.
namespace detail {

inline bool eval_abstract_rec(const AbstractModel& a, int widx, Formula f,
                              std::map<std::pair<const Node*, int>, bool>& memo) {
  auto key = std::make_pair(f.node(), widx);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool out;
  auto member_it = std::find(a.phi.members.begin(), a.phi.members.end(), f);
  if (member_it != a.phi.members.end()) {
    out = a.labels[widx] ==
          static_cast<int>(member_it - a.phi.members.begin());
  } else {
    switch (f.kind()) {
      case NodeKind::Top: out = true; break;
      case NodeKind::Atom:
        throw std::invalid_argument("eval_abstract: atom not in Phi: " +
                                    f.atom_value().text());
      case NodeKind::Not: out = !eval_abstract_rec(a, widx, f.child(), memo); break;
      case NodeKind::And:
        out = eval_abstract_rec(a, widx, f.left(), memo) &&
              eval_abstract_rec(a, widx, f.right(), memo);
        break;
      case NodeKind::Box: {
        out = true;
        for (int u : a.frame.successors(widx))
          if (!eval_abstract_rec(a, u, f.child(), memo)) {
            out = false;
            break;
          }
        break;
      }
      default: out = false;
    }
  }
  memo.emplace(key, out);
  return out;
}

}  // namespace detail

inline bool eval_abstract(const AbstractModel& a, const WorldId& w, Formula f) {
  std::map<std::pair<const detail::Node*, int>, bool> memo;
  return detail::eval_abstract_rec(a, a.frame.index_of(w), f, memo);
}

// ---------------------------------------------------------------------------
// Abstract class identifiers. Partition refinement over the abstract model
// with classes scanned in lexicographic order of their indices; the class
// formulas live in ML(Phi).

inline Formula class_identifier(const AbstractModel& a, unsigned N) {
  if (a.frame.size() > N)
    throw std::invalid_argument("class_identifier: frame size exceeds N");
  struct Cls {
    std::vector<int> worlds;
    Formula psi;
  };
  std::vector<Cls> classes;
  for (size_t mi = 0; mi < a.phi.members.size(); ++mi) {
    std::vector<int> ws;
    for (size_t w = 0; w < a.frame.size(); ++w)
      if (a.labels[w] == static_cast<int>(mi)) ws.push_back(static_cast<int>(w));
    if (!ws.empty()) classes.push_back({std::move(ws), a.phi.members[mi]});
  }

  auto reaches = [&](int w, const std::vector<int>& target) {
    for (int u : a.frame.successors(w))
      if (std::find(target.begin(), target.end(), u) != target.end()) return true;
    return false;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < classes.size() && !changed; ++i) {
      for (size_t j = 0; j < classes.size() && !changed; ++j) {
        std::vector<int> with, without;
        for (int w : classes[i].worlds)
          (reaches(w, classes[j].worlds) ? with : without).push_back(w);
        if (!with.empty() && !without.empty()) {
          Formula psi = classes[i].psi;
          Formula dia = Formula::diamond(classes[j].psi);
          Cls lo{std::move(without), Formula::conj(psi, Formula::negation(dia))};
          classes[i].worlds = std::move(with);
          classes[i].psi = Formula::conj(psi, dia);
          classes.insert(classes.begin() + static_cast<long>(i) + 1, std::move(lo));
          changed = true;
        }
      }
    }
  }

  std::vector<Formula> any;
  for (const Cls& c : classes) any.push_back(c.psi);
  std::vector<Formula> parts{box_upto(Formula::disj_all(any), N)};
  for (const Cls& ci : classes)
    for (const Cls& cj : classes) {
      bool edge = false;
      for (int w : ci.worlds)
        if (reaches(w, cj.worlds)) {
          edge = true;
          break;
        }
      Formula dia = Formula::diamond(cj.psi);
      Formula body = Formula::implies(ci.psi, edge ? dia : Formula::negation(dia));
      parts.push_back(box_upto(body, N));
    }
  Formula chr = Formula::conj_all(parts);

  int root = a.frame.root_index();
  Formula root_psi;
  for (const Cls& c : classes)
    if (std::find(c.worlds.begin(), c.worlds.end(), root) != c.worlds.end())
      root_psi = c.psi;
  return Formula::conj(chr, root_psi);
}

// ---------------------------------------------------------------------------
// sigma-encodings.

struct EncodingClass {
  Formula delta;
  // (frame index within the logic, labeling) for every abstract model in the
  // bisimulation class.
  std::vector<std::pair<int, std::vector<int>>> members;
};

struct EncodingEntry {
  EME phi;
  std::vector<EncodingClass> classes;
};

struct Encoding {
  Signature sigma;
  unsigned N = 0;
  std::vector<EncodingEntry> entries;
};

namespace detail {

// Enumerates all labelings of `frame_sizes` and groups the resulting abstract
// models into abstract bisimulation classes with one refinement pass over the
// disjoint union of all of them.
inline std::vector<EncodingClass> encoding_classes(const Logic& logic, const EME& phi,
                                                   const Budgets& budgets) {
  size_t member_count = phi.members.size();
  uint64_t total_models = 0;
  std::vector<uint64_t> per_frame;
  for (const PointedFrame& fr : logic.frames()) {
    uint64_t c = 1;
    for (size_t i = 0; i < fr.size(); ++i) {
      c *= member_count;
      if (c > budgets.abstract_models)
        throw BudgetExceeded("sigma_encoding: abstract model budget exceeded");
    }
    per_frame.push_back(c);
    total_models += c;
    if (total_models > budgets.abstract_models)
      throw BudgetExceeded("sigma_encoding: abstract model budget exceeded");
  }

  // Disjoint union of all labeled frames.
  struct Entry {
    int frame_index;
    std::vector<int> labels;
    int root_node;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<int>> adj;
  std::vector<int> labels;
  for (size_t fi = 0; fi < logic.frames().size(); ++fi) {
    const PointedFrame& fr = logic.frames()[fi];
    size_t W = fr.size();
    for (uint64_t li = 0; li < per_frame[fi]; ++li) {
      std::vector<int> lab(W);
      uint64_t x = li;
      for (size_t w = 0; w < W; ++w) {
        lab[w] = static_cast<int>(x % member_count);
        x /= member_count;
      }
      int base = static_cast<int>(adj.size());
      for (size_t w = 0; w < W; ++w) {
        std::vector<int> succ;
        for (int u : fr.successors(static_cast<int>(w))) succ.push_back(base + u);
        adj.push_back(std::move(succ));
        labels.push_back(lab[w]);
      }
      entries.push_back({static_cast<int>(fi), std::move(lab), base + fr.root_index()});
    }
  }

  std::vector<int> blocks = coarsest_bisim_blocks(adj, std::move(labels));
  std::map<int, size_t> class_of_block;
  std::vector<EncodingClass> classes;
  unsigned N = logic.max_frame_size();
  for (const Entry& e : entries) {
    int b = blocks[e.root_node];
    auto it = class_of_block.find(b);
    if (it == class_of_block.end()) {
      AbstractModel rep{logic.frames()[e.frame_index], phi, e.labels};
      EncodingClass cls;
      cls.delta = class_identifier(rep, N);
      class_of_block.emplace(b, classes.size());
      classes.push_back(std::move(cls));
      it = class_of_block.find(b);
    }
    classes[it->second].members.emplace_back(e.frame_index, e.labels);
  }
  return classes;
}

}  // namespace detail

// Gamma = union of cover families over the logic's frames; Delta_Phi holds
// one identifier per abstract bisimulation class of abstract Phi-models.
inline Encoding sigma_encoding(const Logic& logic, const Signature& sigma,
                               const Budgets& budgets = default_budgets()) {
  Encoding enc;
  enc.sigma = sigma;
  enc.N = logic.max_frame_size();

  std::map<detail::EmeKey, EME> dedup;
  std::vector<Atom> atoms(sigma.begin(), sigma.end());
  std::set<size_t> sizes;
  for (const PointedFrame& fr : logic.frames()) sizes.insert(fr.size());
  for (size_t sz : sizes) {
    PointedFrame probe = logic.frames().front();
    for (const PointedFrame& fr : logic.frames())
      if (fr.size() == sz) probe = fr;
    for (EME& e : [&] {
           auto v = enumerate_cover_family(probe, sigma, budgets);
           return v;
         }()) {
      detail::EmeKey key;
      for (Formula m : e.members) key.tables.push_back(detail::truth_table(m, atoms));
      std::sort(key.tables.begin(), key.tables.end());
      if (!dedup.count(key)) dedup.emplace(std::move(key), std::move(e));
    }
  }

  for (auto& [key, phi] : dedup) {
    EncodingEntry entry;
    entry.phi = phi;
    entry.classes = detail::encoding_classes(logic, phi, budgets);
    enc.entries.push_back(std::move(entry));
  }
  return enc;
}

}  // namespace tabint
