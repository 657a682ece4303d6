#pragma once

// The modal<->propositional bridge. tr_frame unfolds a modal formula over a
// fixed finite rooted frame into PL over world-indexed atoms; tr_logic adds
// frame selector atoms with a uniqueness gadget. rt_frame translates a
// propositional formula back into ML via a sigma-encoding; rt_logic projects
// per frame first. Membership in a tabular logic reduces to per-frame
// tautology of the translation.

#include "tabint/cover.hpp"

namespace tabint {

inline Signature frame_indexed_signature(const PointedFrame& fr, const Signature& sigma) {
  Signature out;
  for (const Atom& a : sigma) {
    if (a.kind != AtomKind::Plain)
      throw std::invalid_argument("indexed signature: base atoms must be plain");
    for (const WorldId& w : fr.worlds()) out.insert(Atom::indexed(a.base, w));
  }
  return out;
}

inline Atom selector_atom(const PointedFrame& fr) {
  return Atom::selector(fr.name(), fr.root());
}

// sigma_hat = all per-frame indexed blocks plus the frame selectors; frames
// must have mutually disjoint world id sets for the blocks to be disjoint.
struct IndexedSignature {
  Signature base;
  std::vector<Signature> per_frame;
  std::vector<Atom> selectors;

  Signature hat() const {
    Signature out;
    for (const Signature& s : per_frame) out.insert(s.begin(), s.end());
    for (const Atom& r : selectors) out.insert(r);
    return out;
  }
};

inline IndexedSignature logic_indexed_signature(const Logic& logic,
                                                const Signature& sigma) {
  std::set<WorldId> seen;
  for (const PointedFrame& fr : logic.frames())
    for (const WorldId& w : fr.worlds())
      if (!seen.insert(w).second)
        throw std::invalid_argument(
            "logic-level translation requires mutually disjoint world ids; "
            "duplicate world: " + w);
  IndexedSignature is;
  is.base = sigma;
  for (const PointedFrame& fr : logic.frames()) {
    is.per_frame.push_back(frame_indexed_signature(fr, sigma));
    is.selectors.push_back(selector_atom(fr));
  }
  return is;
}

// tr_{F,w}: atoms become indexed atoms, boxes become conjunctions over the
// successor worlds. Memoized on (world, subformula) so shared subterms
// translate once per world and the output dag stays polynomial.
inline Formula tr_frame(const PointedFrame& fr, const WorldId& w, Formula f) {
  size_t W = fr.size();
  std::unordered_map<const detail::Node*, std::vector<std::optional<Formula>>> memo;
  std::function<Formula(int, Formula)> go = [&](int widx, Formula g) -> Formula {
    auto& slots = memo[g.node()];
    if (slots.empty()) slots.assign(W, std::nullopt);
    if (slots[widx]) return *slots[widx];
    Formula out = Formula::top();
    switch (g.kind()) {
      case NodeKind::Top:
        out = Formula::top();
        break;
      case NodeKind::Atom: {
        const Atom& a = g.atom_value();
        if (a.kind != AtomKind::Plain)
          throw std::invalid_argument("tr_frame: formula must be over plain atoms");
        out = Formula::atom(Atom::indexed(a.base, fr.worlds()[widx]));
        break;
      }
      case NodeKind::Not:
        out = Formula::negation(go(widx, g.child()));
        break;
      case NodeKind::And:
        out = Formula::conj(go(widx, g.left()), go(widx, g.right()));
        break;
      case NodeKind::Box: {
        std::vector<Formula> parts;
        for (int u : fr.successors(widx)) parts.push_back(go(u, g.child()));
        out = Formula::conj_all(parts);
        break;
      }
    }
    memo[g.node()][widx] = out;
    return out;
  };
  return go(fr.index_of(w), f);
}

inline Formula unique_selector_formula(const Logic& logic) {
  std::vector<Formula> disjuncts;
  for (size_t i = 0; i < logic.frames().size(); ++i) {
    Formula part = Formula::atom(selector_atom(logic.frames()[i]));
    for (size_t j = 0; j < logic.frames().size(); ++j)
      if (j != i)
        part = Formula::conj(
            part, Formula::negation(Formula::atom(selector_atom(logic.frames()[j]))));
    disjuncts.push_back(part);
  }
  return Formula::disj_all(disjuncts);
}

// tr_L = Unique(F_L) & /\ (r_{F,w} -> tr_{F,w}(f)).
inline Formula tr_logic(const Logic& logic, Formula f) {
  logic_indexed_signature(logic, signature_of(f));  // validates disjointness
  Formula out = unique_selector_formula(logic);
  for (const PointedFrame& fr : logic.frames()) {
    Formula sel = Formula::atom(selector_atom(fr));
    out = Formula::conj(out, Formula::implies(sel, tr_frame(fr, fr.root(), f)));
  }
  return out;
}

// f ∈ Log(F_L) iff tr_{F,root}(f) is a tautology for every frame.
inline bool member_of_logic(const Logic& logic, Formula f,
                            const Budgets& budgets = default_budgets()) {
  for (const PointedFrame& fr : logic.frames())
    if (!is_tautology(tr_frame(fr, fr.root(), f), budgets)) return false;
  return true;
}

// As member_of_logic, but on failure reports the frame and a countermodel.
inline std::optional<std::pair<int, Model>> member_of_logic_witness(
    const Logic& logic, Formula f, const Budgets& budgets = default_budgets()) {
  for (size_t i = 0; i < logic.frames().size(); ++i) {
    const PointedFrame& fr = logic.frames()[i];
    if (auto counter = find_countervaluation(tr_frame(fr, fr.root(), f), budgets)) {
      std::vector<Signature> values(fr.size());
      for (const auto& [atom, val] : *counter) {
        if (val && atom.kind == AtomKind::Indexed)
          values[fr.index_of(atom.world)].insert(Atom::plain(atom.base));
      }
      return std::make_pair(static_cast<int>(i), Model(fr, std::move(values)));
    }
  }
  return std::nullopt;
}

// xi^f: replace each indexed atom p_w by <>^{<=N}(f(w) & p).
inline Formula xi_f(Formula xi, const AbstractModel& a, unsigned N) {
  std::map<Atom, Formula> subst;
  for (const Atom& atom : signature_of(xi)) {
    if (atom.kind != AtomKind::Indexed)
      throw std::invalid_argument("xi_f: expected indexed atoms, got " + atom.text());
    if (!a.frame.has_world(atom.world))
      throw std::invalid_argument("xi_f: world " + atom.world + " not in frame");
    int widx = a.frame.index_of(atom.world);
    subst[atom] = diamond_upto(
        Formula::conj(a.label_formula(widx), Formula::atom(Atom::plain(atom.base))), N);
  }
  return substitute(xi, subst);
}

namespace detail {

inline void check_xi_over_frame(Formula xi, const PointedFrame& fr,
                                const Signature& sigma) {
  for (const Atom& atom : signature_of(xi)) {
    if (atom.kind != AtomKind::Indexed || !fr.has_world(atom.world) ||
        !sigma.count(Atom::plain(atom.base)))
      throw std::invalid_argument("rt_frame: xi atom outside sigma_F: " + atom.text());
  }
}

}  // namespace detail

// rt_{F,L}(xi) = /\_{Phi}/\_{delta}((cover(sigma,Phi) & delta) ->
//                \/_{(F,f) in [delta]_L} xi^f), disjoining only the class
// members based on the given frame.
inline Formula rt_frame(const Logic& logic, int frame_index, Formula xi,
                        const Signature& sigma, const Encoding& enc) {
  const PointedFrame& fr = logic.frames().at(frame_index);
  detail::check_xi_over_frame(xi, fr, sigma);
  unsigned N = enc.N;
  std::vector<Formula> conjuncts;
  for (const EncodingEntry& entry : enc.entries) {
    Formula cover = cover_formula(sigma, entry.phi, N);
    for (const EncodingClass& cls : entry.classes) {
      std::vector<Formula> options;
      for (const auto& [fi, labels] : cls.members) {
        if (fi != frame_index) continue;
        AbstractModel am{fr, entry.phi, labels};
        options.push_back(xi_f(xi, am, N));
      }
      Formula antecedent = Formula::conj(cover, cls.delta);
      conjuncts.push_back(Formula::implies(antecedent, Formula::disj_all(options)));
    }
  }
  return Formula::conj_all(conjuncts);
}

inline Formula rt_frame(const Logic& logic, int frame_index, Formula xi,
                        const Signature& sigma,
                        const Budgets& budgets = default_budgets()) {
  Encoding enc = sigma_encoding(logic, sigma, budgets);
  return rt_frame(logic, frame_index, xi, sigma, enc);
}

// xi^{|F,w}: this frame's selector becomes true, the other selectors false,
// and indexed atoms of foreign frames false.
inline Formula project_xi(Formula xi, const Logic& logic, int frame_index) {
  const PointedFrame& target = logic.frames().at(frame_index);
  std::map<Atom, Formula> subst;
  for (const Atom& atom : signature_of(xi)) {
    if (atom.kind == AtomKind::Selector) {
      bool known = false;
      for (const PointedFrame& fr : logic.frames())
        if (selector_atom(fr) == atom) known = true;
      if (!known)
        throw std::invalid_argument("project_xi: unknown selector " + atom.text());
      subst[atom] =
          (atom == selector_atom(target)) ? Formula::top() : Formula::bot();
    } else if (atom.kind == AtomKind::Indexed) {
      if (!target.has_world(atom.world)) subst[atom] = Formula::bot();
    } else {
      throw std::invalid_argument("project_xi: unexpected plain atom " + atom.text());
    }
  }
  return simplify(substitute(xi, subst));
}

// rt_L(xi) = \/_{(F,w)} rt_{(F,w),L}(xi^{|F,w}).
inline Formula rt_logic(const Logic& logic, Formula xi, const Signature& sigma,
                        const Budgets& budgets = default_budgets()) {
  Encoding enc = sigma_encoding(logic, sigma, budgets);
  std::vector<Formula> parts;
  for (size_t i = 0; i < logic.frames().size(); ++i) {
    Formula projected = project_xi(xi, logic, static_cast<int>(i));
    parts.push_back(rt_frame(logic, static_cast<int>(i), projected, sigma, enc));
  }
  return Formula::disj_all(parts);
}

}  // namespace tabint
