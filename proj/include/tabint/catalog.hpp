#pragma once

// Builders for the standard frame families and tabular logics (clusters,
// chains, forks, the pre-tabular families) plus generators for the witness
// formula families used in the size experiments.

#include "tabint/kripke.hpp"

namespace tabint {

namespace detail {

inline std::vector<WorldId> numbered_worlds(unsigned count) {
  std::vector<WorldId> ws;
  for (unsigned i = 0; i < count; ++i) ws.push_back(std::to_string(i));
  return ws;
}

}  // namespace detail

// Total relation on n worlds (S5 cluster), rooted at 0.
inline PointedFrame make_cluster(unsigned n) {
  if (n < 1) throw std::invalid_argument("cluster: n must be >= 1");
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      edges.emplace_back(std::to_string(i), std::to_string(j));
  return PointedFrame("cl" + std::to_string(n), detail::numbered_worlds(n),
                      std::move(edges), "0");
}

// Reflexive-transitive ascending chain with `len` steps (Grz.3 shape).
inline PointedFrame make_refl_chain(unsigned len) {
  unsigned n = len + 1;
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j)
      edges.emplace_back(std::to_string(i), std::to_string(j));
  return PointedFrame("rch" + std::to_string(len), detail::numbered_worlds(n),
                      std::move(edges), "0");
}

// Strict transitive chain with `len` steps (GL.3 shape).
inline PointedFrame make_irrefl_chain(unsigned len) {
  unsigned n = len + 1;
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j)
      edges.emplace_back(std::to_string(i), std::to_string(j));
  return PointedFrame("ich" + std::to_string(len), detail::numbered_worlds(n),
                      std::move(edges), "0");
}

// Root with k immediate successors; fork(3) is the Example-3 frame.
inline PointedFrame make_fork(unsigned k) {
  if (k < 1) throw std::invalid_argument("fork: k must be >= 1");
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = 1; i <= k; ++i) edges.emplace_back("0", std::to_string(i));
  return PointedFrame("fork" + std::to_string(k), detail::numbered_worlds(k + 1),
                      std::move(edges), "0");
}

// Cluster of n above a reflexive bottom world (reflexive/transitive closure
// applied).
inline PointedFrame make_f1(unsigned n) {
  if (n < 1) throw std::invalid_argument("f1: n must be >= 1");
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j)
      edges.emplace_back(std::to_string(i), std::to_string(j));
    edges.emplace_back(std::to_string(i), std::to_string(n));
  }
  edges.emplace_back(std::to_string(n), std::to_string(n));
  return PointedFrame("f1_" + std::to_string(n), detail::numbered_worlds(n + 1),
                      std::move(edges), "0");
}

// Reflexive root with n reflexive successors.
inline PointedFrame make_f2(unsigned n) {
  if (n < 1) throw std::invalid_argument("f2: n must be >= 1");
  std::vector<std::pair<WorldId, WorldId>> edges{{"0", "0"}};
  for (unsigned i = 1; i <= n; ++i) {
    edges.emplace_back("0", std::to_string(i));
    edges.emplace_back(std::to_string(i), std::to_string(i));
  }
  return PointedFrame("f2_" + std::to_string(n), detail::numbered_worlds(n + 1),
                      std::move(edges), "0");
}

// As f2 with a common reflexive bottom world below the successors.
inline PointedFrame make_f3(unsigned n) {
  if (n < 1) throw std::invalid_argument("f3: n must be >= 1");
  unsigned bottom = n + 1;
  std::vector<std::pair<WorldId, WorldId>> edges{{"0", "0"}};
  edges.emplace_back("0", std::to_string(bottom));
  for (unsigned i = 1; i <= n; ++i) {
    edges.emplace_back("0", std::to_string(i));
    edges.emplace_back(std::to_string(i), std::to_string(i));
    edges.emplace_back(std::to_string(i), std::to_string(bottom));
  }
  edges.emplace_back(std::to_string(bottom), std::to_string(bottom));
  return PointedFrame("f3_" + std::to_string(n), detail::numbered_worlds(n + 2),
                      std::move(edges), "0");
}

// GL-type frame: bottom root t0 below a width-wide antichain u_* and a chain
// t1..tn, both feeding the top chain s_m..s_1; strict and transitively closed.
inline PointedFrame make_f_nm(unsigned n, unsigned m, unsigned width) {
  if (n < 1 || m < 1) throw std::invalid_argument("f_nm: n and m must be >= 1");
  std::vector<WorldId> worlds{"t0"};
  for (unsigned i = 1; i <= n; ++i) worlds.push_back("t" + std::to_string(i));
  for (unsigned i = 0; i < width; ++i) worlds.push_back("u" + std::to_string(i));
  for (unsigned i = m; i >= 1; --i) worlds.push_back("s" + std::to_string(i));
  std::vector<std::pair<WorldId, WorldId>> base;
  base.emplace_back("t0", "t1");
  for (unsigned i = 1; i < n; ++i)
    base.emplace_back("t" + std::to_string(i), "t" + std::to_string(i + 1));
  base.emplace_back("t" + std::to_string(n), "s" + std::to_string(m));
  for (unsigned i = 0; i < width; ++i) {
    base.emplace_back("t0", "u" + std::to_string(i));
    base.emplace_back("u" + std::to_string(i), "s" + std::to_string(m));
  }
  for (unsigned i = m; i > 1; --i)
    base.emplace_back("s" + std::to_string(i), "s" + std::to_string(i - 1));
  // transitive closure
  std::set<std::pair<WorldId, WorldId>> closed(base.begin(), base.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<WorldId, WorldId>> add;
    for (const auto& [a, b] : closed)
      for (const auto& [c, d] : closed)
        if (b == c && !closed.count({a, d})) add.emplace_back(a, d);
    for (auto& e : add) grew |= closed.insert(e).second;
  }
  return PointedFrame("f" + std::to_string(n) + "_" + std::to_string(m) + "x" +
                          std::to_string(width),
                      std::move(worlds),
                      std::vector<std::pair<WorldId, WorldId>>(closed.begin(),
                                                               closed.end()),
                      "t0");
}

// Descending chain k -> k-1 -> ... -> 0 rooted at k (the Alt_1 chain shape).
inline PointedFrame make_alt_chain(unsigned len) {
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (unsigned i = len; i >= 1; --i)
    edges.emplace_back(std::to_string(i), std::to_string(i - 1));
  return PointedFrame("alt" + std::to_string(len), detail::numbered_worlds(len + 1),
                      std::move(edges), std::to_string(len));
}

namespace detail {

// Multi-frame logics need mutually disjoint world ids for the logic-level
// translation, so worlds get the frame name as a prefix.
inline PointedFrame qualify_worlds(const PointedFrame& fr) {
  auto rename = [&](const WorldId& w) { return fr.name() + "_" + w; };
  std::vector<WorldId> worlds;
  for (const WorldId& w : fr.worlds()) worlds.push_back(rename(w));
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (const auto& [a, b] : fr.edges()) edges.emplace_back(rename(a), rename(b));
  return PointedFrame(fr.name(), std::move(worlds), std::move(edges), rename(fr.root()));
}

}  // namespace detail

// EQ(n): one cluster per size 1..n (all root choices are isomorphic).
inline Logic make_eq_logic(unsigned n) {
  if (n < 1) throw std::invalid_argument("EQ: n must be >= 1");
  std::vector<PointedFrame> frames;
  for (unsigned i = 1; i <= n; ++i) {
    PointedFrame fr = make_cluster(i);
    frames.push_back(n == 1 ? fr : detail::qualify_worlds(fr));
  }
  return Logic("EQ" + std::to_string(n), std::move(frames), true);
}

// LO(n): strict transitive chains of lengths 0..n; the shorter chains are the
// generated subframes, so the set is closed as required for a normal logic.
inline Logic make_lo_logic(unsigned n) {
  if (n < 1) throw std::invalid_argument("LO: n must be >= 1");
  std::vector<PointedFrame> frames;
  for (unsigned len = 0; len <= n; ++len)
    frames.push_back(detail::qualify_worlds(make_irrefl_chain(len)));
  return Logic("LO" + std::to_string(n), std::move(frames), true);
}

// Quasi-normal singleton logic of the three-successor fork (Example-3 logic).
inline Logic make_l13_logic() { return Logic("L13", {make_fork(3)}, false); }

inline Logic make_fork_logic(unsigned k) {
  return Logic("FORK" + std::to_string(k), {make_fork(k)}, false);
}

// Built-in logic names for the CLI: L13, EQ<k>, LO<k>, FORK<k>.
inline std::optional<Logic> logic_by_name(const std::string& name) {
  auto tail_number = [](const std::string& s, size_t prefix) -> std::optional<unsigned> {
    if (s.size() <= prefix) return std::nullopt;
    unsigned v = 0;
    for (size_t i = prefix; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(s[i] - '0');
    }
    return v;
  };
  if (name == "L13") return make_l13_logic();
  if (name.rfind("EQ", 0) == 0) {
    if (auto n = tail_number(name, 2)) return make_eq_logic(*n);
  }
  if (name.rfind("LO", 0) == 0) {
    if (auto n = tail_number(name, 2)) return make_lo_logic(*n);
  }
  if (name.rfind("FORK", 0) == 0) {
    if (auto n = tail_number(name, 4)) return make_fork_logic(*n);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Witness families.

// All 2^k literal conjunctions over p0..p{k-1}; index bit i set means the
// i-th literal is negative, so index 0 is the all-positive type.
inline std::vector<Formula> type_conjunctions(unsigned k,
                                              const std::string& base = "p") {
  std::vector<Formula> types;
  for (uint64_t t = 0; t < (uint64_t{1} << k); ++t) {
    std::vector<Formula> lits;
    for (unsigned i = 0; i < k; ++i) {
      Formula p = Formula::atom(base + std::to_string(i));
      lits.push_back(((t >> i) & 1) ? Formula::negation(p) : p);
    }
    types.push_back(Formula::conj_all(lits));
  }
  return types;
}

struct WitnessImplicate {
  Formula phi;
  Signature sigma;
  Formula chi;
  unsigned n = 0, k = 0;
  std::vector<unsigned> f_table;
  unsigned chi_depth = 0;
};

// phi_n = []^{<=f(kn)} \/_i ~(p_i <-> q_i)
//         & []^{<=f(kn)-1} /\_i ((q_i -> []q_i) & (~q_i -> []~q_i));
// chi_n = \/_{t in T_kn} []^{<=d} ~t with d defaulting to f(kn).
inline WitnessImplicate witness_implicate(unsigned n, unsigned k,
                                          const std::vector<unsigned>& f_table,
                                          std::optional<unsigned> chi_depth = {}) {
  if (n < 1 || k < 1) throw std::invalid_argument("witness_implicate: n,k >= 1");
  unsigned kn = k * n;
  if (f_table.size() <= kn)
    throw std::invalid_argument("witness_implicate: f table must cover kn");
  unsigned depth = f_table[kn];
  if (depth < 1) throw std::invalid_argument("witness_implicate: f(kn) must be >= 1");

  std::vector<Formula> diffs;
  std::vector<Formula> persist;
  for (unsigned i = 0; i < kn; ++i) {
    Formula p = Formula::atom("p" + std::to_string(i));
    Formula q = Formula::atom("q" + std::to_string(i));
    diffs.push_back(Formula::negation(Formula::iff(p, q)));
    persist.push_back(Formula::conj(
        Formula::implies(q, Formula::box(q)),
        Formula::implies(Formula::negation(q), Formula::box(Formula::negation(q)))));
  }
  Formula phi = Formula::conj(box_upto(Formula::disj_all(diffs), depth),
                              box_upto(Formula::conj_all(persist), depth - 1));

  unsigned d = chi_depth.value_or(depth);
  std::vector<Formula> disjuncts;
  for (Formula t : type_conjunctions(kn))
    disjuncts.push_back(box_upto(Formula::negation(t), d));
  Formula chi = Formula::disj_all(disjuncts);

  Signature sigma;
  for (unsigned i = 0; i < kn; ++i) sigma.insert(Atom::plain("p" + std::to_string(i)));
  return WitnessImplicate{phi, sigma, chi, n, k, f_table, d};
}

struct WitnessCraig {
  Formula phi;
  Formula psi;
  Formula interpolant;
  unsigned n = 0;
  Signature sigma;
};

// phi_n = r & chi(q,p) & <>(~r & /\(p_i <-> q_i)),
// psi_n = r & (chi(q',p) -> <>(~r & /\(p_i <-> q'_i))),
// I_n   = \/_t (r & t & <>(~r & t))  over the shared signature {r, p_*}.
inline WitnessCraig witness_craig(unsigned n) {
  if (n < 1) throw std::invalid_argument("witness_craig: n >= 1");
  Formula r = Formula::atom("r");
  auto chain = [&](const std::string& qbase) {
    std::vector<Formula> parts;
    for (unsigned i = 0; i < n; ++i) {
      Formula p = Formula::atom("p" + std::to_string(i));
      Formula q = Formula::atom(qbase + std::to_string(i));
      parts.push_back(Formula::conj_all(std::vector<Formula>{
          Formula::iff(p, q), Formula::implies(q, Formula::box(q)),
          Formula::implies(Formula::negation(q), Formula::box(Formula::negation(q)))}));
    }
    return Formula::conj_all(parts);
  };
  auto agree = [&](const std::string& qbase) {
    std::vector<Formula> parts;
    for (unsigned i = 0; i < n; ++i)
      parts.push_back(Formula::iff(Formula::atom("p" + std::to_string(i)),
                                   Formula::atom(qbase + std::to_string(i))));
    return Formula::conj_all(parts);
  };
  Formula phi = Formula::conj(
      Formula::conj(r, chain("q")),
      Formula::diamond(Formula::conj(Formula::negation(r), agree("q"))));
  Formula psi = Formula::conj(
      r, Formula::implies(chain("qp"),
                          Formula::diamond(Formula::conj(Formula::negation(r),
                                                         agree("qp")))));
  std::vector<Formula> disjuncts;
  for (Formula t : type_conjunctions(n))
    disjuncts.push_back(Formula::conj(
        Formula::conj(r, t),
        Formula::diamond(Formula::conj(Formula::negation(r), t))));
  Formula interpolant = Formula::disj_all(disjuncts);
  Signature sigma{Atom::plain("r")};
  for (unsigned i = 0; i < n; ++i) sigma.insert(Atom::plain("p" + std::to_string(i)));
  return WitnessCraig{phi, psi, interpolant, n, sigma};
}

// Wraps a valid propositional implication into the no-CIP obstruction pair
// for the fork-3 logic.
inline std::pair<Formula, Formula> witness_nocip(Formula base_phi, Formula base_psi) {
  Signature base_sig = signature_of(base_phi);
  for (const Atom& a : signature_of(base_psi)) base_sig.insert(a);
  for (const char* name : {"p", "q", "r"})
    if (base_sig.count(Atom::plain(name)))
      throw std::invalid_argument(
          std::string("witness_nocip: base signature overlaps reserved atom ") + name);
  Formula p = Formula::atom("p"), q = Formula::atom("q"), r = Formula::atom("r");
  Formula phi = Formula::conj_all(std::vector<Formula>{
      Formula::diamond(Formula::conj(p, q)),
      Formula::diamond(Formula::conj(p, Formula::negation(q))),
      Formula::box(base_phi)});
  Formula psi = Formula::disj(
      Formula::implies(Formula::diamond(Formula::conj(Formula::negation(p), r)),
                       Formula::box(Formula::implies(Formula::negation(p), r))),
      Formula::box(base_psi));
  return {phi, psi};
}

// Structural disjunct count of the printed or-spine.
inline size_t count_disjuncts(Formula f) {
  if (f.kind() == NodeKind::Not && f.child().kind() == NodeKind::And) {
    size_t total = 0;
    for (Formula c : conjuncts_of(f.child()))
      total += count_disjuncts(Formula::negation(c));
    return total;
  }
  return 1;
}

}  // namespace tabint
