#pragma once

// The Alt_1 reduction: chain-indexed forward translations, per-depth uniform
// interpolants, and assembly of the modal uniform interpolant guarded by
// chain-length tests. Verification brute-forces the bisimulation
// characterization over descending chains up to a bound.

#include "tabint/catalog.hpp"
#include "tabint/interpolation.hpp"

namespace tabint {

// F_0..F_n where F_k is the descending chain k -> k-1 -> ... -> 0 rooted at k.
inline std::vector<PointedFrame> alt_chain_family(unsigned n) {
  std::vector<PointedFrame> frames;
  for (unsigned k = 0; k <= n; ++k) frames.push_back(make_alt_chain(k));
  return frames;
}

// tr_i over sigma x {0..i}: atoms become p@i, a box at level 0 is vacuously
// true and otherwise steps down one level (chains have exactly one successor
// below the end).
inline Formula tr_alt_i(Formula f, unsigned i) {
  std::map<std::pair<const detail::Node*, unsigned>, Formula> memo;
  std::function<Formula(Formula, unsigned)> go = [&](Formula g, unsigned lvl) -> Formula {
    auto key = std::make_pair(g.node(), lvl);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Formula out = Formula::top();
    switch (g.kind()) {
      case NodeKind::Top: out = Formula::top(); break;
      case NodeKind::Atom: {
        if (g.atom_value().kind != AtomKind::Plain)
          throw std::invalid_argument("tr_alt_i: formula must be over plain atoms");
        out = Formula::atom(Atom::indexed(g.atom_value().base, std::to_string(lvl)));
        break;
      }
      case NodeKind::Not: out = Formula::negation(go(g.child(), lvl)); break;
      case NodeKind::And:
        out = Formula::conj(go(g.left(), lvl), go(g.right(), lvl));
        break;
      case NodeKind::Box:
        out = (lvl == 0) ? Formula::top() : go(g.child(), lvl - 1);
        break;
    }
    memo.emplace(key, out);
    return out;
  };
  return go(f, i);
}

namespace detail {

inline Formula diamond_pow(Formula f, unsigned k) {
  for (unsigned i = 0; i < k; ++i) f = Formula::diamond(f);
  return f;
}

// rt_i: p_j becomes <>^{i-j} p.
inline Formula alt_back_substitute(Formula xi, unsigned i) {
  std::map<Atom, Formula> subst;
  for (const Atom& a : signature_of(xi)) {
    if (a.kind != AtomKind::Indexed)
      throw std::invalid_argument("alt rt: expected indexed atom, got " + a.text());
    unsigned j = static_cast<unsigned>(std::stoul(a.world));
    if (j > i) throw std::invalid_argument("alt rt: level above current chain");
    subst[a] = diamond_pow(Formula::atom(Atom::plain(a.base)), i - j);
  }
  return substitute(xi, subst);
}

}  // namespace detail

// psi = /\_{0<=i<n} (<>^i [] false -> rt_i(psi_i)) & (<>^n true -> rt_n(psi_n))
// with psi_i a propositional uniform interpolant of tr_i(f) onto tau x {0..i}.
inline Formula alt1_uniform_interpolant(Formula f, const Signature& tau,
                                        const Budgets& budgets = default_budgets()) {
  Signature sig = signature_of(f);
  for (const Atom& a : tau)
    if (!sig.count(a))
      throw std::invalid_argument("alt1_uniform_interpolant: tau must be within sig(f)");
  unsigned n = modal_depth(f);
  std::vector<Formula> parts;
  for (unsigned i = 0; i <= n; ++i) {
    Signature kept;
    for (const Atom& a : tau)
      for (unsigned j = 0; j <= i; ++j)
        kept.insert(Atom::indexed(a.base, std::to_string(j)));
    Formula psi_i =
        simplify(prop_uniform_interpolant(tr_alt_i(f, i), kept, budgets));
    Formula back = detail::alt_back_substitute(psi_i, i);
    Formula guard = (i < n)
                        ? detail::diamond_pow(Formula::box(Formula::bot()), i)
                        : detail::diamond_pow(Formula::top(), n);
    parts.push_back(Formula::implies(guard, back));
  }
  return Formula::conj_all(parts);
}

// Premise-to-interpolant validity plus the maximality side of the uniform
// interpolant contract, both brute-forced over chains of length 0..bound
// (Alt_1 and chain models agree up to the modal depth tested here; the bound
// is recorded in the verdict).
inline Verdict verify_alt1_interpolant(Formula f, const Signature& tau, Formula psi,
                                       unsigned bound,
                                       const Budgets& budgets = default_budgets()) {
  if (bound < modal_depth(f) + 2)
    throw std::invalid_argument("verify_alt1_interpolant: bound must be depth(f)+2 or more");
  for (const Atom& a : signature_of(psi)) {
    if (!tau.count(a)) {
      Verdict out;
      out.holds = false;
      out.witness_formula = Formula::atom(a);
      out.detail = "interpolant mentions " + a.text() + " outside tau";
      return out;
    }
  }
  Logic chains("AltChains" + std::to_string(bound), alt_chain_family(bound), false);
  if (auto w = member_of_logic_witness(chains, Formula::implies(f, psi), budgets)) {
    Verdict out;
    out.holds = false;
    out.witness_model = w->second;
    out.detail = "premise does not imply the interpolant on chain " +
                 chains.frames()[w->first].name();
    return out;
  }
  Verdict v = verify_strongest_implicate(chains, f, tau, psi, budgets);
  if (v.holds)
    v.detail = "verified over descending chains of length 0.." + std::to_string(bound);
  return v;
}

}  // namespace tabint
