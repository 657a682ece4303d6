#pragma once

// Shared test helpers: seeded random formula generation (both directly and as
// a sugar-level syntax tree with its own evaluator), random models, and
// exhaustive enumeration of small rooted frames.

#include <random>

#include "tabint/kripke.hpp"

namespace tabint::testutil {

// Sugar-level syntax tree kept separate from the hash-consed representation,
// with a direct evaluator. Used as an independent oracle for the
// normalization done by the Formula constructors.
struct Sugar {
  enum Kind { Top, Bot, AtomK, Not, And, Or, Implies, Iff, Box, Dia } kind;
  int a = -1, b = -1;
  std::string atom;
};

struct SugarTree {
  std::vector<Sugar> nodes;
  int root = -1;

  int add(Sugar s) {
    nodes.push_back(std::move(s));
    return static_cast<int>(nodes.size()) - 1;
  }

  Formula build(int at) const {
    const Sugar& s = nodes[at];
    switch (s.kind) {
      case Sugar::Top: return Formula::top();
      case Sugar::Bot: return Formula::bot();
      case Sugar::AtomK: return Formula::atom(s.atom);
      case Sugar::Not: return Formula::negation(build(s.a));
      case Sugar::And: return Formula::conj(build(s.a), build(s.b));
      case Sugar::Or: return Formula::disj(build(s.a), build(s.b));
      case Sugar::Implies: return Formula::implies(build(s.a), build(s.b));
      case Sugar::Iff: return Formula::iff(build(s.a), build(s.b));
      case Sugar::Box: return Formula::box(build(s.a));
      case Sugar::Dia: return Formula::diamond(build(s.a));
    }
    return Formula::top();
  }
  Formula build() const { return build(root); }

  bool eval(const Model& m, int world, int at) const {
    const Sugar& s = nodes[at];
    switch (s.kind) {
      case Sugar::Top: return true;
      case Sugar::Bot: return false;
      case Sugar::AtomK: return m.holds_atom(world, Atom::plain(s.atom));
      case Sugar::Not: return !eval(m, world, s.a);
      case Sugar::And: return eval(m, world, s.a) && eval(m, world, s.b);
      case Sugar::Or: return eval(m, world, s.a) || eval(m, world, s.b);
      case Sugar::Implies: return !eval(m, world, s.a) || eval(m, world, s.b);
      case Sugar::Iff: return eval(m, world, s.a) == eval(m, world, s.b);
      case Sugar::Box: {
        for (int u : m.frame().successors(world))
          if (!eval(m, u, s.a)) return false;
        return true;
      }
      case Sugar::Dia: {
        for (int u : m.frame().successors(world))
          if (eval(m, u, s.a)) return true;
        return false;
      }
    }
    return false;
  }
  bool eval(const Model& m, int world) const { return eval(m, world, root); }
};

inline int random_sugar(SugarTree& t, std::mt19937& rng, int depth,
                        const std::vector<std::string>& atoms, bool modal) {
  std::uniform_int_distribution<int> pick(0, 99);
  int roll = pick(rng);
  if (depth == 0 || roll < 30) {
    if (roll % 10 == 0) return t.add({roll % 20 == 0 ? Sugar::Top : Sugar::Bot});
    std::uniform_int_distribution<size_t> ai(0, atoms.size() - 1);
    Sugar s{Sugar::AtomK};
    s.atom = atoms[ai(rng)];
    return t.add(s);
  }
  int kind = roll % (modal ? 8 : 6);
  switch (kind) {
    case 0: {
      Sugar s{Sugar::Not};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    case 1: case 2: {
      Sugar s{Sugar::And};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      s.b = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    case 3: {
      Sugar s{Sugar::Or};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      s.b = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    case 4: {
      Sugar s{Sugar::Implies};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      s.b = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    case 5: {
      Sugar s{Sugar::Iff};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      s.b = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    case 6: {
      Sugar s{Sugar::Box};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
    default: {
      Sugar s{Sugar::Dia};
      s.a = random_sugar(t, rng, depth - 1, atoms, modal);
      return t.add(s);
    }
  }
}

inline SugarTree random_sugar_tree(std::mt19937& rng, int depth,
                                   const std::vector<std::string>& atoms, bool modal) {
  SugarTree t;
  t.root = random_sugar(t, rng, depth, atoms, modal);
  return t;
}

inline Formula random_formula(std::mt19937& rng, int depth,
                              const std::vector<std::string>& atoms, bool modal) {
  return random_sugar_tree(rng, depth, atoms, modal).build();
}

inline Model random_model(std::mt19937& rng, const PointedFrame& fr,
                          const Signature& sigma) {
  std::vector<Signature> values(fr.size());
  std::uniform_int_distribution<int> coin(0, 1);
  for (size_t w = 0; w < fr.size(); ++w)
    for (const Atom& a : sigma)
      if (coin(rng)) values[w].insert(a);
  return Model(fr, std::move(values));
}

// All rooted pointed frames on exactly n worlds named "0".."n-1", rooted at
// "0" (every edge subset whose reachable set from 0 covers all worlds).
inline std::vector<PointedFrame> all_rooted_frames(unsigned n) {
  std::vector<PointedFrame> out;
  unsigned bits = n * n;
  for (uint64_t mask = 0; mask < (uint64_t{1} << bits); ++mask) {
    std::vector<std::pair<WorldId, WorldId>> edges;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j)
        if ((mask >> (i * n + j)) & 1)
          edges.emplace_back(std::to_string(i), std::to_string(j));
    try {
      out.emplace_back("g" + std::to_string(mask), std::vector<WorldId>([&] {
                         std::vector<WorldId> ws;
                         for (unsigned i = 0; i < n; ++i) ws.push_back(std::to_string(i));
                         return ws;
                       }()),
                       std::move(edges), "0");
    } catch (const std::invalid_argument&) {
      // not rooted, skip
    }
  }
  return out;
}

}  // namespace tabint::testutil
