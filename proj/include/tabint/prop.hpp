#pragma once

// Propositional backend: evaluation, tautology and equivalence checking,
// variable forgetting by Shannon expansion, Craig interpolants, and a
// size-nonincreasing simplifier. Truth-table sweeps run 64 valuations per
// word; every sweep is capped by the valuation budget.

#include <cassert>
#include <optional>

#include "tabint/budget.hpp"
#include "tabint/formula.hpp"

namespace tabint {

using Valuation = std::map<Atom, bool>;

struct ModalOperatorError : std::invalid_argument {
  explicit ModalOperatorError(const std::string& op)
      : std::invalid_argument(op + ": modal operator present") {}
};

inline bool eval_prop(Formula f, const Valuation& v) {
  std::unordered_map<const detail::Node*, bool> memo;
  for (const detail::Node* n : collect_nodes(f)) {
    bool val = true;
    switch (n->kind) {
      case NodeKind::Top: val = true; break;
      case NodeKind::Atom: {
        auto it = v.find(n->atom);
        val = (it != v.end()) && it->second;
        break;
      }
      case NodeKind::Not: val = !memo.at(n->left); break;
      case NodeKind::And: val = memo.at(n->left) && memo.at(n->right); break;
      case NodeKind::Box: throw ModalOperatorError("eval_prop");
    }
    memo[n] = val;
  }
  return memo.at(f.node());
}

namespace detail {

// Lane masks for valuation bits 0..5 within a 64-valuation block: bit b of
// the valuation index alternates with period 2^b across lanes.
inline constexpr uint64_t kLaneMask[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};

struct BulkEvaluator {
  std::vector<const Node*> topo;
  std::unordered_map<const Node*, size_t> index;
  std::vector<int> atom_bit;  // -1 for non-atoms
  std::vector<uint64_t> lanes;

  BulkEvaluator(Formula f, const std::vector<Atom>& atoms) {
    topo = collect_nodes(f);
    index.reserve(topo.size());
    atom_bit.assign(topo.size(), -1);
    lanes.assign(topo.size(), 0);
    std::map<Atom, int> bit_of;
    for (size_t i = 0; i < atoms.size(); ++i) bit_of[atoms[i]] = static_cast<int>(i);
    for (size_t i = 0; i < topo.size(); ++i) {
      index[topo[i]] = i;
      if (topo[i]->kind == NodeKind::Atom) {
        auto it = bit_of.find(topo[i]->atom);
        if (it == bit_of.end())
          throw std::invalid_argument("bulk eval: atom outside declared signature: " +
                                      topo[i]->atom.text());
        atom_bit[i] = it->second;
      }
      if (topo[i]->kind == NodeKind::Box) throw ModalOperatorError("is_tautology");
    }
  }

  // Evaluates valuations base..base+63; base must be a multiple of 64.
  uint64_t eval_block(uint64_t base) {
    for (size_t i = 0; i < topo.size(); ++i) {
      const Node* n = topo[i];
      switch (n->kind) {
        case NodeKind::Top: lanes[i] = ~0ull; break;
        case NodeKind::Atom: {
          int b = atom_bit[i];
          lanes[i] = (b < 6) ? kLaneMask[b]
                             : (((base >> b) & 1) ? ~0ull : 0ull);
          break;
        }
        case NodeKind::Not: lanes[i] = ~lanes[index.at(n->left)]; break;
        case NodeKind::And:
          lanes[i] = lanes[index.at(n->left)] & lanes[index.at(n->right)];
          break;
        case NodeKind::Box: break;  // rejected in constructor
      }
    }
    return lanes.back();
  }
};

}  // namespace detail

// Searches for a valuation falsifying f (atoms of f only). nullopt = tautology.
inline std::optional<Valuation> find_countervaluation(
    Formula f, const Budgets& budgets = default_budgets()) {
  Signature sig = signature_of(f);
  std::vector<Atom> atoms(sig.begin(), sig.end());
  if (atoms.size() >= 63) throw BudgetExceeded("is_tautology: too many atoms");
  uint64_t total = uint64_t{1} << atoms.size();
  if (total > budgets.valuations)
    throw BudgetExceeded("is_tautology: valuation budget exceeded");
  detail::BulkEvaluator ev(f, atoms);
  for (uint64_t base = 0; base < total; base += 64) {
    uint64_t res = ev.eval_block(base);
    uint64_t valid = (total - base >= 64) ? ~0ull : ((uint64_t{1} << (total - base)) - 1);
    uint64_t bad = ~res & valid;
    if (bad) {
      uint64_t idx = base + static_cast<uint64_t>(__builtin_ctzll(bad));
      Valuation v;
      for (size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (idx >> i) & 1;
      return v;
    }
  }
  return std::nullopt;
}

inline bool is_tautology(Formula f, const Budgets& budgets = default_budgets()) {
  return !find_countervaluation(f, budgets).has_value();
}

inline bool is_satisfiable(Formula f, const Budgets& budgets = default_budgets()) {
  return find_countervaluation(Formula::negation(f), budgets).has_value();
}

inline bool prop_equivalent(Formula f, Formula g,
                            const Budgets& budgets = default_budgets()) {
  return is_tautology(Formula::iff(f, g), budgets);
}

// ---------------------------------------------------------------------------
// Simplifier. Constant folding, idempotence, absorption and unit propagation
// on the and/or skeleton; box subterms are treated as opaque (units never
// propagate through a box), so the pass is also sound on modal input.

namespace detail {

inline bool is_literal(Formula f, Atom& atom, bool& positive) {
  if (f.kind() == NodeKind::Atom) {
    atom = f.atom_value();
    positive = true;
    return true;
  }
  if (f.kind() == NodeKind::Not && f.child().kind() == NodeKind::Atom) {
    atom = f.child().atom_value();
    positive = false;
    return true;
  }
  return false;
}

// Substitution that stops at box nodes.
inline Formula subst_units_above_boxes(Formula f, const std::map<Atom, Formula>& s,
                                       std::unordered_map<const Node*, Formula>& memo) {
  auto it = memo.find(f.node());
  if (it != memo.end()) return it->second;
  Formula out = f;
  switch (f.kind()) {
    case NodeKind::Top:
    case NodeKind::Box:
      out = f;
      break;
    case NodeKind::Atom: {
      auto sit = s.find(f.atom_value());
      out = (sit != s.end()) ? sit->second : f;
      break;
    }
    case NodeKind::Not:
      out = Formula::negation(subst_units_above_boxes(f.child(), s, memo));
      break;
    case NodeKind::And:
      out = Formula::conj(subst_units_above_boxes(f.left(), s, memo),
                          subst_units_above_boxes(f.right(), s, memo));
      break;
  }
  memo.emplace(f.node(), out);
  return out;
}

class Simplifier {
 public:
  Formula run(Formula f) {
    auto it = memo_.find(f.node());
    if (it != memo_.end()) return it->second;
    Formula out;
    switch (f.kind()) {
      case NodeKind::Top:
      case NodeKind::Atom:
        out = f;
        break;
      case NodeKind::Not:
        out = Formula::negation(run(f.child()));
        break;
      case NodeKind::Box: {
        Formula c = run(f.child());
        out = c.is_top() ? Formula::top() : Formula::box(c);
        break;
      }
      case NodeKind::And:
        out = simplify_conjunction(f);
        break;
    }
    memo_.emplace(f.node(), out);
    return out;
  }

 private:
  std::unordered_map<const Node*, Formula> memo_;

  static constexpr size_t kAbsorptionCap = 512;

  Formula simplify_conjunction(Formula f) {
    std::vector<Formula> parts;
    for (Formula c : conjuncts_of(f)) {
      Formula s = run(c);
      for (Formula cc : conjuncts_of(s)) parts.push_back(cc);
    }

    // Constants, duplicates, complementary pairs.
    std::vector<Formula> list;
    std::set<Formula> present;
    for (Formula c : parts) {
      if (c.is_top()) continue;
      if (c.is_bot()) return Formula::bot();
      if (present.count(c)) continue;
      if (present.count(Formula::negation(c))) return Formula::bot();
      present.insert(c);
      list.push_back(c);
    }
    if (list.empty()) return Formula::top();

    // Unit propagation into non-literal conjuncts (above boxes only).
    std::map<Atom, Formula> units;
    bool unit_conflict = false;
    for (Formula c : list) {
      Atom a;
      bool pos;
      if (is_literal(c, a, pos)) {
        Formula val = pos ? Formula::top() : Formula::bot();
        auto it = units.find(a);
        if (it != units.end() && it->second != val) unit_conflict = true;
        units.emplace(a, val);
      }
    }
    if (unit_conflict) return Formula::bot();
    if (!units.empty()) {
      std::unordered_map<const Node*, Formula> subst_memo;
      for (Formula& c : list) {
        Atom a;
        bool pos;
        if (is_literal(c, a, pos)) continue;
        Formula c2 = subst_units_above_boxes(c, units, subst_memo);
        if (c2 != c) c = run(c2);
      }
      // Re-collect: substitution may have produced constants or new units.
      std::vector<Formula> flat;
      for (Formula c : list)
        for (Formula cc : conjuncts_of(c)) flat.push_back(cc);
      std::vector<Formula> cleaned;
      std::set<Formula> seen;
      for (Formula c : flat) {
        if (c.is_top()) continue;
        if (c.is_bot()) return Formula::bot();
        if (seen.count(c)) continue;
        if (seen.count(Formula::negation(c))) return Formula::bot();
        seen.insert(c);
        cleaned.push_back(c);
      }
      list = std::move(cleaned);
      present = std::move(seen);
      if (list.empty()) return Formula::top();
    }

    // Clause-level rules for disjunctive conjuncts ~(~a & ~b & ...):
    //  - absorption: x and (x | D) together drop the disjunction;
    //  - unit resolution: ~x removes disjunct x.
    if (list.size() <= kAbsorptionCap) {
      std::vector<Formula> out;
      for (Formula c : list) {
        if (c.kind() == NodeKind::Not && c.child().kind() == NodeKind::And) {
          std::vector<Formula> disjuncts;
          for (Formula d : conjuncts_of(c.child()))
            disjuncts.push_back(Formula::negation(d));
          bool absorbed = false;
          std::vector<Formula> kept;
          bool changed = false;
          for (Formula d : disjuncts) {
            if (present.count(d) && d != c) { absorbed = true; break; }
            if (present.count(Formula::negation(d))) { changed = true; continue; }
            kept.push_back(d);
          }
          if (absorbed) continue;
          if (changed) {
            std::vector<Formula> negs;
            negs.reserve(kept.size());
            for (Formula d : kept) negs.push_back(Formula::negation(d));
            Formula rebuilt = Formula::negation(Formula::conj_all(negs));
            if (rebuilt.is_bot()) return Formula::bot();
            if (!rebuilt.is_top()) out.push_back(run(rebuilt));
            continue;
          }
        }
        out.push_back(c);
      }
      list = std::move(out);
      if (list.empty()) return Formula::top();
    }

    return Formula::conj_all(list);
  }
};

}  // namespace detail

// Equivalence-preserving, never increases dag_size, idempotent.
inline Formula simplify(Formula f) {
  std::set<Formula> seen;
  for (;;) {
    if (!seen.insert(f).second) return f;
    Formula g = detail::Simplifier{}.run(f);
    if (g == f) return f;
    if (dag_size(g) > dag_size(f)) return f;
    f = g;
  }
}

// ---------------------------------------------------------------------------
// Forgetting (existential projection) by iterated Shannon expansion with
// simplification after each elimination. Elimination order is ascending atom
// order, which fixes the output syntactically.

inline Formula forget(Formula f, const Signature& xs,
                      const Budgets& budgets = default_budgets()) {
  (void)budgets;
  if (!is_propositional(f)) throw ModalOperatorError("forget");
  Signature sig = signature_of(f);
  Formula g = f;
  for (const Atom& x : xs) {
    if (!sig.count(x)) continue;
    std::map<Atom, Formula> hi{{x, Formula::top()}};
    std::map<Atom, Formula> lo{{x, Formula::bot()}};
    g = simplify(Formula::disj(substitute(g, hi), substitute(g, lo)));
    sig = signature_of(g);
  }
  return g;
}

inline Formula prop_uniform_interpolant(Formula f, const Signature& sigma,
                                        const Budgets& budgets = default_budgets()) {
  if (!is_propositional(f)) throw ModalOperatorError("prop_uniform_interpolant");
  Signature drop;
  for (const Atom& a : signature_of(f))
    if (!sigma.count(a)) drop.insert(a);
  return forget(f, drop, budgets);
}

struct NotValidImplication : std::runtime_error {
  Valuation counter;
  NotValidImplication(const std::string& msg, Valuation v)
      : std::runtime_error(msg), counter(std::move(v)) {}
};

inline Formula prop_craig_interpolant(Formula f, Formula g,
                                      const Budgets& budgets = default_budgets()) {
  if (!is_propositional(f) || !is_propositional(g))
    throw ModalOperatorError("prop_craig_interpolant");
  if (auto counter = find_countervaluation(Formula::implies(f, g), budgets)) {
    throw NotValidImplication("prop_craig_interpolant: implication is not a tautology",
                              *counter);
  }
  Signature shared;
  Signature sg = signature_of(g);
  for (const Atom& a : signature_of(f))
    if (sg.count(a)) shared.insert(a);
  return prop_uniform_interpolant(f, shared, budgets);
}

}  // namespace tabint
