#pragma once

// Top-level algorithms: strongest implicates and modal Craig interpolants by
// reduction to the propositional engine, semantic verification oracles that
// brute-force the bisimulation characterization, the CIP decision for tabular
// logics, and frame diagram formulas.

#include "tabint/translate.hpp"

namespace tabint {

struct Verdict {
  bool holds = true;
  std::optional<Model> witness_model;
  std::optional<Formula> witness_formula;
  std::string detail;
};

struct CipRequired : std::runtime_error {
  explicit CipRequired(const std::string& logic)
      : std::runtime_error(
            "logic " + logic +
            " lacks the Craig interpolation property; the translation-based "
            "method can produce non-interpolants there and interpolants may be "
            "superpolynomially larger, so the computation is refused") {}
};

struct NotValidModalImplication : std::runtime_error {
  int frame_index;
  std::optional<Model> counter;
  NotValidModalImplication(std::string msg, int fi, std::optional<Model> m)
      : std::runtime_error(std::move(msg)), frame_index(fi), counter(std::move(m)) {}
};

// ---------------------------------------------------------------------------
// Strongest implicates (per-frame pipeline).

// sigma may contain atoms outside sig(f); they still shape the covers and
// identifiers of the encoding (the worked examples rely on this).
inline Formula strongest_implicate(const Logic& logic, Formula f, const Signature& sigma,
                                   const Budgets& budgets = default_budgets()) {
  Encoding enc = sigma_encoding(logic, sigma, budgets);
  std::vector<Formula> parts;
  for (size_t i = 0; i < logic.frames().size(); ++i) {
    const PointedFrame& fr = logic.frames()[i];
    Formula translated = tr_frame(fr, fr.root(), f);
    Formula xi = simplify(
        prop_uniform_interpolant(translated, frame_indexed_signature(fr, sigma), budgets));
    parts.push_back(rt_frame(logic, static_cast<int>(i), xi, sigma, enc));
  }
  return simplify(Formula::disj_all(parts));
}

// ---------------------------------------------------------------------------
// Brute-force verification of the bisimulation characterization: chi is the
// strongest L(sigma)-implicate of f iff on every model over sig(f) based on a
// frame of L, chi holds at the root exactly when some sigma-bisimilar model
// on a frame of L satisfies f.

namespace detail {

// Evaluates a formula on one frame across 64 valuations at a time. Valuation
// bit layout matches ModelStream: bit (i*|W| + w) is atom i at world w.
struct ModalBulkEvaluator {
  const PointedFrame& frame;
  std::vector<const Node*> topo;
  std::unordered_map<const Node*, size_t> index;
  std::vector<int> atom_bit;
  std::vector<uint64_t> lanes;  // node-major, then world

  ModalBulkEvaluator(const PointedFrame& fr, Formula f, const std::vector<Atom>& atoms)
      : frame(fr) {
    topo = collect_nodes(f);
    std::map<Atom, int> pos;
    for (size_t i = 0; i < atoms.size(); ++i) pos[atoms[i]] = static_cast<int>(i);
    atom_bit.assign(topo.size(), -1);
    for (size_t i = 0; i < topo.size(); ++i) {
      index[topo[i]] = i;
      if (topo[i]->kind == NodeKind::Atom) {
        auto it = pos.find(topo[i]->atom);
        if (it == pos.end())
          throw std::invalid_argument("verify: atom outside enumeration signature: " +
                                      topo[i]->atom.text());
        atom_bit[i] = it->second;
      }
    }
    lanes.assign(topo.size() * frame.size(), 0);
  }

  // Returns the 64 root-values for valuations base..base+63.
  uint64_t eval_block(uint64_t base) {
    size_t W = frame.size();
    for (size_t i = 0; i < topo.size(); ++i) {
      const Node* n = topo[i];
      for (size_t w = 0; w < W; ++w) {
        uint64_t v = ~0ull;
        switch (n->kind) {
          case NodeKind::Top: break;
          case NodeKind::Atom: {
            uint64_t b = static_cast<uint64_t>(atom_bit[i]) * W + w;
            v = (b < 6) ? kLaneMask[b] : (((base >> b) & 1) ? ~0ull : 0ull);
            break;
          }
          case NodeKind::Not:
            v = ~lanes[index.at(n->left) * W + w];
            break;
          case NodeKind::And:
            v = lanes[index.at(n->left) * W + w] & lanes[index.at(n->right) * W + w];
            break;
          case NodeKind::Box: {
            for (int u : frame.successors(static_cast<int>(w)))
              v &= lanes[index.at(n->left) * W + u];
            break;
          }
        }
        lanes[i * W + w] = v;
      }
    }
    return lanes[index.at(topo.back()) * W + frame.root_index()];
  }
};

}  // namespace detail

inline Verdict verify_strongest_implicate(const Logic& logic, Formula f,
                                          const Signature& sigma, Formula chi,
                                          const Budgets& budgets = default_budgets()) {
  for (const Atom& a : signature_of(chi))
    if (!sigma.count(a))
      throw std::invalid_argument("verify_strongest_implicate: sig(chi) not within sigma");

  // Enumeration covers sig(f) plus sigma: satisfaction only reads sig(f),
  // bisimilarity only reads sigma, so this is exact.
  Signature sig_f = signature_of(f);
  for (const Atom& a : sigma) sig_f.insert(a);
  std::vector<Atom> atoms(sig_f.begin(), sig_f.end());
  std::vector<int> sigma_positions;
  for (size_t i = 0; i < atoms.size(); ++i)
    if (sigma.count(atoms[i])) sigma_positions.push_back(static_cast<int>(i));

  // Pass 1: build the disjoint union of every model on every frame, refine by
  // sigma-valuation labels, and record per-root block and f-satisfaction.
  struct FrameData {
    uint64_t count;
    uint64_t world_base;
  };
  std::vector<FrameData> fd;
  uint64_t total_worlds = 0;
  uint64_t total_models = 0;
  for (const PointedFrame& fr : logic.frames()) {
    uint64_t bits = atoms.size() * fr.size();
    if (bits > budgets.model_bits)
      throw BudgetExceeded("verify_strongest_implicate: |sig(f)|*|W| exceeds budget");
    uint64_t count = uint64_t{1} << bits;
    fd.push_back({count, total_worlds});
    total_worlds += count * fr.size();
    total_models += count;
  }
  if (total_models > budgets.valuations || total_worlds > (uint64_t{1} << 26))
    throw BudgetExceeded("verify_strongest_implicate: model budget exceeded");

  std::vector<std::vector<int>> adj(total_worlds);
  std::vector<int> labels(total_worlds);
  for (size_t fi = 0; fi < logic.frames().size(); ++fi) {
    const PointedFrame& fr = logic.frames()[fi];
    size_t W = fr.size();
    for (uint64_t v = 0; v < fd[fi].count; ++v) {
      uint64_t base = fd[fi].world_base + v * W;
      for (size_t w = 0; w < W; ++w) {
        for (int u : fr.successors(static_cast<int>(w)))
          adj[base + w].push_back(static_cast<int>(base + u));
        int label = 0;
        for (size_t k = 0; k < sigma_positions.size(); ++k)
          if ((v >> (static_cast<uint64_t>(sigma_positions[k]) * W + w)) & 1)
            label |= 1 << k;
        labels[base + w] = label;
      }
    }
  }
  std::vector<int> blocks = coarsest_bisim_blocks(adj, std::move(labels));

  std::vector<char> sat_f(total_models), sat_chi(total_models);
  std::vector<int> root_block(total_models);
  uint64_t model_base = 0;
  for (size_t fi = 0; fi < logic.frames().size(); ++fi) {
    const PointedFrame& fr = logic.frames()[fi];
    detail::ModalBulkEvaluator ef(fr, f, atoms);
    detail::ModalBulkEvaluator ec(fr, chi, atoms);
    for (uint64_t block = 0; block < fd[fi].count; block += 64) {
      uint64_t rf = ef.eval_block(block);
      uint64_t rc = ec.eval_block(block);
      uint64_t n = std::min<uint64_t>(64, fd[fi].count - block);
      for (uint64_t l = 0; l < n; ++l) {
        uint64_t m = model_base + block + l;
        sat_f[m] = (rf >> l) & 1;
        sat_chi[m] = (rc >> l) & 1;
        root_block[m] =
            blocks[fd[fi].world_base + (block + l) * fr.size() + fr.root_index()];
      }
    }
    model_base += fd[fi].count;
  }

  std::set<int> blocks_with_f;
  for (uint64_t m = 0; m < total_models; ++m)
    if (sat_f[m]) blocks_with_f.insert(root_block[m]);

  // Pass 2: first mismatch in canonical enumeration order is the witness.
  model_base = 0;
  for (size_t fi = 0; fi < logic.frames().size(); ++fi) {
    const PointedFrame& fr = logic.frames()[fi];
    for (uint64_t v = 0; v < fd[fi].count; ++v) {
      uint64_t m = model_base + v;
      bool lhs = sat_chi[m];
      bool rhs = blocks_with_f.count(root_block[m]) > 0;
      if (lhs != rhs) {
        std::vector<Signature> values(fr.size());
        for (size_t i = 0; i < atoms.size(); ++i)
          for (size_t w = 0; w < fr.size(); ++w)
            if ((v >> (i * fr.size() + w)) & 1) values[w].insert(atoms[i]);
        Verdict out;
        out.holds = false;
        out.witness_model = Model(fr, std::move(values));
        out.detail = lhs ? "chi holds at the root but no sigma-bisimilar model on a "
                           "frame of the logic satisfies the premise"
                         : "a sigma-bisimilar model satisfies the premise but chi "
                           "fails at the root";
        return out;
      }
    }
    model_base += fd[fi].count;
  }
  return Verdict{};
}

// ---------------------------------------------------------------------------
// Frame diagrams: pin a pointed frame up to automorphism with fresh atoms.

inline Formula diagram_formula(const PointedFrame& pf, unsigned N) {
  auto q = [&](const WorldId& w) { return Formula::atom(Atom::plain("q_" + w)); };
  std::vector<Formula> parts{q(pf.root())};
  std::vector<Formula> all;
  for (const WorldId& w : pf.worlds()) all.push_back(q(w));
  parts.push_back(box_upto(Formula::disj_all(all), N));
  for (const WorldId& v : pf.worlds())
    for (const WorldId& v2 : pf.worlds())
      if (v != v2)
        parts.push_back(box_upto(Formula::implies(q(v), Formula::negation(q(v2))), N));
  for (const WorldId& v : pf.worlds())
    for (const WorldId& v2 : pf.worlds()) {
      Formula dia = Formula::diamond(q(v2));
      if (pf.has_edge(pf.index_of(v), pf.index_of(v2)))
        parts.push_back(box_upto(Formula::implies(q(v), dia), N));
      else
        parts.push_back(box_upto(Formula::implies(q(v), Formula::negation(dia)), N));
    }
  return Formula::conj_all(parts);
}

// ---------------------------------------------------------------------------
// CIP decision. The frame set is first reduced by dropping frames whose
// pointed logic contains another frame's (diagram satisfiability, Fact 2(1):
// diag_N(F_i) satisfiable on F_j iff Log(F_i) contains Log(F_j)). Then the
// reduct-isomorphism criterion is decided over joint colorings: a coloring
// with |W1|+|W2| colors stands for the sigma-valuation classes of an
// arbitrary model pair, so roots that are color-bisimilar must make the
// colored frames color-isomorphic.

namespace detail {

inline std::vector<int> reduced_frame_indices(const Logic& logic, const Budgets& budgets) {
  size_t n = logic.frames().size();
  unsigned N = logic.max_frame_size();
  std::vector<std::vector<char>> contains(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) {
        contains[i][j] = 1;
        continue;
      }
      Formula diag = diagram_formula(logic.frames()[i], N);
      Logic single("single", {logic.frames()[j]}, false);
      contains[i][j] = !member_of_logic(single, Formula::negation(diag), budgets);
    }
  std::vector<int> keep;
  for (size_t i = 0; i < n; ++i) {
    bool drop = false;
    for (size_t j = 0; j < n && !drop; ++j) {
      if (i == j) continue;
      if (contains[i][j] && (!contains[j][i] || j < i)) drop = true;
    }
    if (!drop) keep.push_back(static_cast<int>(i));
  }
  return keep;
}

// Restricted-growth strings = joint colorings up to color renaming.
template <typename Fn>
void for_each_rgs(size_t n, Fn&& fn) {
  std::vector<int> c(n, 0);
  std::function<void(size_t, int)> rec = [&](size_t k, int maxc) {
    if (k == n) {
      fn(c);
      return;
    }
    for (int v = 0; v <= maxc + 1; ++v) {
      c[k] = v;
      rec(k + 1, std::max(maxc, v));
    }
  };
  if (n == 0) return;
  rec(0, -1);
}

inline Model colored_model(const PointedFrame& fr, const std::vector<int>& colors,
                           size_t offset) {
  std::vector<Signature> values(fr.size());
  for (size_t w = 0; w < fr.size(); ++w)
    values[w].insert(Atom::plain("c" + std::to_string(colors[offset + w])));
  return Model(fr, std::move(values));
}

}  // namespace detail

inline std::optional<std::pair<Model, Model>> has_cip_witness(
    const Logic& logic, const Budgets& budgets = default_budgets()) {
  std::vector<int> kept = detail::reduced_frame_indices(logic, budgets);
  for (int i : kept) {
    for (int j : kept) {
      const PointedFrame& f1 = logic.frames()[i];
      const PointedFrame& f2 = logic.frames()[j];
      size_t n = f1.size() + f2.size();
      std::optional<std::pair<Model, Model>> found;
      detail::for_each_rgs(n, [&](const std::vector<int>& colors) {
        if (found) return;
        Model m1 = detail::colored_model(f1, colors, 0);
        Model m2 = detail::colored_model(f2, colors, f1.size());
        Signature palette;
        for (int c : colors) palette.insert(Atom::plain("c" + std::to_string(c)));
        if (!sigma_bisimilar(m1, m2, palette)) return;
        if (!reduct_isomorphic(m1, m2, palette)) found = std::make_pair(m1, m2);
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

inline bool has_cip(const Logic& logic, const Budgets& budgets = default_budgets()) {
  return !has_cip_witness(logic, budgets).has_value();
}

// ---------------------------------------------------------------------------
// Craig interpolants for tabular logics with CIP.

inline Formula modal_craig_interpolant(const Logic& logic, Formula f, Formula g,
                                       const Budgets& budgets = default_budgets()) {
  if (auto w = member_of_logic_witness(logic, Formula::implies(f, g), budgets)) {
    throw NotValidModalImplication(
        "modal_craig_interpolant: the implication is not in " + logic.name(), w->first,
        w->second);
  }
  if (!has_cip(logic, budgets)) throw CipRequired(logic.name());
  Signature sg = signature_of(g);
  Signature sigma;
  for (const Atom& a : signature_of(f))
    if (sg.count(a)) sigma.insert(a);
  Encoding enc = sigma_encoding(logic, sigma, budgets);
  std::vector<Formula> parts;
  for (size_t i = 0; i < logic.frames().size(); ++i) {
    const PointedFrame& fr = logic.frames()[i];
    Formula xi = simplify(prop_craig_interpolant(tr_frame(fr, fr.root(), f),
                                                 tr_frame(fr, fr.root(), g), budgets));
    parts.push_back(rt_frame(logic, static_cast<int>(i), xi, sigma, enc));
  }
  return simplify(Formula::disj_all(parts));
}

inline Verdict verify_craig(const Logic& logic, Formula f, Formula g, Formula chi,
                            const Budgets& budgets = default_budgets()) {
  Signature shared;
  Signature sg = signature_of(g);
  for (const Atom& a : signature_of(f))
    if (sg.count(a)) shared.insert(a);
  for (const Atom& a : signature_of(chi)) {
    if (!shared.count(a)) {
      Verdict out;
      out.holds = false;
      out.witness_formula = Formula::atom(a);
      out.detail = "sig(chi) contains " + a.text() + " outside sig(f) & sig(g)";
      return out;
    }
  }
  if (auto w = member_of_logic_witness(logic, Formula::implies(f, chi), budgets)) {
    Verdict out;
    out.holds = false;
    out.witness_model = w->second;
    out.detail = "premise does not imply chi on frame " +
                 logic.frames()[w->first].name();
    return out;
  }
  if (auto w = member_of_logic_witness(logic, Formula::implies(chi, g), budgets)) {
    Verdict out;
    out.holds = false;
    out.witness_model = w->second;
    out.detail = "chi does not imply the conclusion on frame " +
                 logic.frames()[w->first].name();
    return out;
  }
  return Verdict{};
}

// Justified by the coincidence of strongest implicates and uniform
// interpolants in logics with CIP.
inline Formula uniform_interpolant(const Logic& logic, Formula f, const Signature& sigma,
                                   const Budgets& budgets = default_budgets()) {
  if (!has_cip(logic, budgets)) throw CipRequired(logic.name());
  return strongest_implicate(logic, f, sigma, budgets);
}

}  // namespace tabint
