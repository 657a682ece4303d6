#include <catch2/catch_amalgamated.hpp>

#include "tabint/alt1.hpp"
#include "tabint/catalog.hpp"
#include "tabint/interpolation.hpp"
#include "test_util.hpp"

using namespace tabint;

namespace {

const Atom P = Atom::plain("p");
const Atom Q = Atom::plain("q");

// v_M: the propositional valuation over indexed atoms induced by a model.
Valuation model_valuation(const Model& m, const Signature& base) {
  Valuation v;
  for (const Atom& a : base)
    for (size_t w = 0; w < m.frame().size(); ++w)
      v[Atom::indexed(a.base, m.frame().worlds()[w])] =
          m.holds_atom(static_cast<int>(w), a);
  return v;
}

// Canonical DNF for an arbitrary truth table over the given atoms; used to
// enumerate xi exhaustively up to equivalence.
Formula formula_from_table(const std::vector<Atom>& atoms, uint64_t table) {
  std::vector<Formula> minterms;
  for (uint64_t idx = 0; idx < (uint64_t{1} << atoms.size()); ++idx) {
    if (!((table >> idx) & 1)) continue;
    std::vector<Formula> lits;
    for (size_t i = 0; i < atoms.size(); ++i) {
      Formula a = Formula::atom(atoms[i]);
      lits.push_back(((idx >> i) & 1) ? a : Formula::negation(a));
    }
    minterms.push_back(Formula::conj_all(lits));
  }
  return Formula::disj_all(minterms);
}

}  // namespace

TEST_CASE("tr_frame clause shapes") {
  PointedFrame fork = make_fork(3);
  Formula dia = tr_frame(fork, "0", parse_formula("<>p"));
  REQUIRE(dia == parse_formula("p@1 | p@2 | p@3"));

  // box at a world without successors is the empty conjunction
  REQUIRE(tr_frame(fork, "1", parse_formula("[]p")) == Formula::top());
  REQUIRE(tr_frame(fork, "1", parse_formula("p")) ==
          Formula::atom(Atom::indexed("p", "1")));
  REQUIRE_THROWS_AS(tr_frame(fork, "0", parse_formula("p@3")), std::invalid_argument);
}

TEST_CASE("tr_frame satisfaction bridge on random formulas") {
  std::mt19937 rng(1001);
  std::vector<PointedFrame> frames{make_fork(3), make_cluster(3), make_irrefl_chain(3),
                                   make_refl_chain(2), make_alt_chain(2)};
  Signature sigma{P, Q};
  for (int i = 0; i < 300; ++i) {
    Formula f = testutil::random_formula(rng, 3, {"p", "q"}, true);
    const PointedFrame& fr = frames[i % frames.size()];
    Model m = testutil::random_model(rng, fr, sigma);
    Valuation v = model_valuation(m, sigma);
    for (const WorldId& w : fr.worlds()) {
      REQUIRE(satisfies(m, w, f) == eval_prop(tr_frame(fr, w, f), v));
    }
  }
}

TEST_CASE("tr_frame dag size stays polynomial") {
  std::mt19937 rng(1002);
  std::vector<PointedFrame> frames{make_fork(3), make_cluster(4), make_refl_chain(3)};
  for (int i = 0; i < 100; ++i) {
    Formula f = testutil::random_formula(rng, 4, {"p", "q", "r"}, true);
    const PointedFrame& fr = frames[i % frames.size()];
    Formula t = tr_frame(fr, fr.root(), f);
    REQUIRE(dag_size(t) <= dag_size(f) * fr.size() * 8);
  }
}

TEST_CASE("worked uniform interpolant of the translated premise") {
  PointedFrame fork = make_fork(3);
  Formula premise = parse_formula("<>(p & q) & <>(p & ~q) & <>s");
  Signature sigma{P, Atom::plain("r"), Atom::plain("s")};
  Formula xi = prop_uniform_interpolant(tr_frame(fork, "0", premise),
                                        frame_indexed_signature(fork, sigma));
  Formula expected = parse_formula(
      "((p@1 & p@2) | (p@2 & p@3) | (p@3 & p@1)) & (s@1 | s@2 | s@3)");
  REQUIRE(prop_equivalent(xi, expected));
}

TEST_CASE("tr_logic selector gadget") {
  Logic eq2 = make_eq_logic(2);
  Formula u = unique_selector_formula(eq2);
  Formula r1 = Formula::atom(selector_atom(eq2.frames()[0]));
  Formula r2 = Formula::atom(selector_atom(eq2.frames()[1]));
  Formula expected = Formula::disj(
      Formula::conj(r1, Formula::negation(r2)),
      Formula::conj(r2, Formula::negation(r1)));
  REQUIRE(u == expected);

  // singleton logic: tr_logic is equivalent to r & tr_frame
  Logic l13 = make_l13_logic();
  Formula f = parse_formula("<>p");
  Formula tl = tr_logic(l13, f);
  Formula r = Formula::atom(selector_atom(l13.frames()[0]));
  REQUIRE(prop_equivalent(tl,
                          Formula::conj(r, tr_frame(l13.frames()[0], "0", f))));
}

TEST_CASE("tr_logic agreement on models (Claim 1)") {
  std::mt19937 rng(321);
  Logic l13 = make_l13_logic();
  Formula f = parse_formula("<>(p & q) & <>(p & ~q)");
  Signature sigma = signature_of(f);
  Formula tl = tr_logic(l13, f);
  const PointedFrame& fr = l13.frames()[0];
  for_each_model(fr, sigma, [&](const Model& m) {
    Valuation v = model_valuation(m, sigma);
    v[selector_atom(fr)] = true;
    REQUIRE(satisfies(m, "0", f) == eval_prop(tl, v));
  });

  // multi-frame: foreign block atoms are arbitrary
  Logic eq2 = make_eq_logic(2);
  Formula g = parse_formula("<>p & q");
  Formula tl2 = tr_logic(eq2, g);
  for (size_t fi = 0; fi < eq2.frames().size(); ++fi) {
    const PointedFrame& frame = eq2.frames()[fi];
    for_each_model(frame, signature_of(g), [&](const Model& m) {
      Valuation v = model_valuation(m, signature_of(g));
      for (size_t fj = 0; fj < eq2.frames().size(); ++fj) {
        v[selector_atom(eq2.frames()[fj])] = (fi == fj);
        if (fi != fj) {
          for (const Atom& a : signature_of(g))
            for (const WorldId& w : eq2.frames()[fj].worlds())
              v[Atom::indexed(a.base, w)] = (rng() % 2) != 0;
        }
      }
      REQUIRE(satisfies(m, frame.root(), g) == eval_prop(tl2, v));
    });
  }
}

TEST_CASE("tr_logic requires disjoint world ids") {
  // two frames sharing world names
  Logic clash("clash", {make_fork(2), make_cluster(2)}, false);
  REQUIRE_THROWS_AS(tr_logic(clash, parse_formula("p")), std::invalid_argument);
}

TEST_CASE("xi_f substitution") {
  EME phi{{P, Atom::plain("r"), Atom::plain("s")},
          {parse_formula("p"), parse_formula("~p & r"), parse_formula("~p & ~r")}};
  AbstractModel a{make_fork(3), phi, {1, 0, 0, 2}};
  unsigned N = 4;

  Formula xi = Formula::atom(Atom::indexed("p", "1"));
  Formula out = xi_f(xi, a, N);
  REQUIRE(out == diamond_upto(Formula::conj(parse_formula("p"), parse_formula("p")), N));

  REQUIRE(xi_f(Formula::top(), a, N) == Formula::top());
  REQUIRE_THROWS_AS(xi_f(Formula::atom(Atom::indexed("p", "zz")), a, N),
                    std::invalid_argument);

  // worked example: xi^f simplifies to
  // <=N-diamond p & (<=N-diamond (s&p) | <=N-diamond (s&~p&~r))
  Formula big = parse_formula(
      "((p@1 & p@2) | (p@2 & p@3) | (p@3 & p@1)) & (s@1 | s@2 | s@3)");
  Formula subst = xi_f(big, a, N);
  Formula sp = Formula::conj(parse_formula("s"), parse_formula("p"));
  Formula s_np_nr = Formula::conj(parse_formula("s"), parse_formula("~p & ~r"));
  Formula hand = Formula::conj(
      diamond_upto(parse_formula("p"), N),
      Formula::disj(diamond_upto(sp, N), diamond_upto(s_np_nr, N)));
  // plain modal equivalence, checked on two frames by enumeration
  for (const PointedFrame& fr : {make_fork(3), make_cluster(3)}) {
    for_each_model(fr, phi.sigma, [&](const Model& m) {
      REQUIRE(satisfies(m, fr.root(), subst) == satisfies(m, fr.root(), hand));
    });
  }
}

TEST_CASE("rt_frame golden example: back-translation is <>p") {
  Logic l13 = make_l13_logic();
  const PointedFrame& fork = l13.frames()[0];
  Formula premise = parse_formula("<>(p & q) & <>(p & ~q)");
  Signature sigma{P};
  Formula xi = simplify(prop_uniform_interpolant(tr_frame(fork, "0", premise),
                                                 frame_indexed_signature(fork, sigma)));
  Formula rt = rt_frame(l13, 0, xi, sigma);
  REQUIRE(member_of_logic(l13, Formula::iff(rt, parse_formula("<>p"))));
}

TEST_CASE("rt_frame of false is false on the logic") {
  Logic l13 = make_l13_logic();
  Formula rt = rt_frame(l13, 0, Formula::bot(), Signature{P});
  REQUIRE(member_of_logic(l13, Formula::negation(rt)));
}

TEST_CASE("rt_frame bisimulation characterization, exhaustively") {
  // For every boolean function xi over sigma_F and every model M on a frame
  // of L: M |= rt_F(xi) iff some model M' on F with M ~sigma M' has v_M' |= xi.
  struct Case {
    Logic logic;
    int frame_index;
  };
  std::vector<Case> cases;
  cases.push_back({make_l13_logic(), 0});
  cases.push_back({make_eq_logic(2), 0});
  cases.push_back({make_eq_logic(2), 1});

  for (const Case& c : cases) {
    const Logic& logic = c.logic;
    const PointedFrame& target = logic.frames()[c.frame_index];
    Signature sigma{P};
    Encoding enc = sigma_encoding(logic, sigma);
    std::vector<Atom> xi_atoms;
    for (const WorldId& w : target.worlds()) xi_atoms.push_back(Atom::indexed("p", w));

    // all models on the target frame, with their valuations
    std::vector<Model> targets;
    for_each_model(target, sigma, [&](const Model& m) { targets.push_back(m); });

    uint64_t tables = uint64_t{1} << (uint64_t{1} << xi_atoms.size());
    uint64_t step = (xi_atoms.size() >= 3) ? 37 : 1;  // sample for the 3-atom case
    for (uint64_t table = 0; table < tables; table += step) {
      Formula xi = formula_from_table(xi_atoms, table);
      Formula rt = rt_frame(logic, c.frame_index, xi, sigma, enc);
      for (const PointedFrame& fr : logic.frames()) {
        for_each_model(fr, sigma, [&](const Model& m) {
          bool lhs = satisfies(m, fr.root(), rt);
          bool rhs = false;
          for (const Model& m2 : targets) {
            if (!sigma_bisimilar(m, m2, sigma)) continue;
            if (eval_prop(xi, model_valuation(m2, sigma))) rhs = true;
          }
          CAPTURE(logic.name(), c.frame_index, table, fr.name());
          REQUIRE(lhs == rhs);
        });
      }
    }
  }
}

TEST_CASE("project_xi") {
  Logic eq2 = make_eq_logic(2);
  Formula r1 = Formula::atom(selector_atom(eq2.frames()[0]));
  Formula chi = Formula::atom(Atom::indexed("p", eq2.frames()[0].worlds()[0]));
  REQUIRE(project_xi(Formula::conj(r1, chi), eq2, 0) == chi);
  // foreign indexed atom drops to false
  Formula foreign = Formula::atom(Atom::indexed("p", eq2.frames()[1].worlds()[0]));
  REQUIRE(project_xi(foreign, eq2, 0) == Formula::bot());
  REQUIRE(project_xi(Formula::disj(chi, foreign), eq2, 0) == simplify(chi));
  REQUIRE_THROWS_AS(project_xi(Formula::atom(Atom::selector("nosuch", "0")), eq2, 0),
                    std::invalid_argument);
}

TEST_CASE("projections of a logic-level uniform interpolant are frame-level ones") {
  // two-frame toy logic: chains of length 0 and 1
  Logic lo1 = make_lo_logic(1);
  Formula f = parse_formula("<>p");
  Signature sigma{P};
  IndexedSignature is = logic_indexed_signature(lo1, sigma);
  Formula xi = simplify(prop_uniform_interpolant(tr_logic(lo1, f), is.hat()));
  for (size_t i = 0; i < lo1.frames().size(); ++i) {
    const PointedFrame& fr = lo1.frames()[i];
    Formula proj = project_xi(xi, lo1, static_cast<int>(i));
    Formula direct = prop_uniform_interpolant(tr_frame(fr, fr.root(), f),
                                              frame_indexed_signature(fr, sigma));
    // uniform interpolants are unique up to equivalence
    REQUIRE(prop_equivalent(proj, direct));
  }
}

TEST_CASE("rt_logic end-to-end on tiny logics") {
  // singleton: rt_logic is rt_frame of the projection
  Logic eq1 = make_eq_logic(1);
  Signature sigma{P};
  IndexedSignature is1 = logic_indexed_signature(eq1, sigma);
  Formula f = parse_formula("p");
  Formula xi = simplify(prop_uniform_interpolant(tr_logic(eq1, f), is1.hat()));
  Formula back = rt_logic(eq1, xi, sigma);
  REQUIRE(member_of_logic(eq1, Formula::iff(back, f)));

  // EQ(2), f = <>p: the result is a strongest implicate
  Logic eq2 = make_eq_logic(2);
  Formula g = parse_formula("<>p & q");
  Signature tau{P};
  IndexedSignature is2 = logic_indexed_signature(eq2, signature_of(g));
  Signature tau_hat;
  for (const Atom& a : is2.hat())
    if (a.kind == AtomKind::Selector || a.base == "p") tau_hat.insert(a);
  Formula xi2 = simplify(prop_uniform_interpolant(tr_logic(eq2, g), tau_hat));
  Formula back2 = rt_logic(eq2, xi2, tau);
  Verdict v = verify_strongest_implicate(eq2, g, tau, simplify(back2));
  CAPTURE(v.detail);
  REQUIRE(v.holds);
}
