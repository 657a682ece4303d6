#include <catch2/catch_amalgamated.hpp>

#include "tabint/prop.hpp"
#include "test_util.hpp"

using namespace tabint;

namespace {

std::vector<Atom> atom_vec(const Signature& s) { return {s.begin(), s.end()}; }

// Independent oracle: the full truth table of f over the given atom order.
std::vector<bool> truth_table_oracle(Formula f, const std::vector<Atom>& atoms) {
  std::vector<bool> out;
  uint64_t total = uint64_t{1} << atoms.size();
  for (uint64_t idx = 0; idx < total; ++idx) {
    Valuation v;
    for (size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (idx >> i) & 1;
    out.push_back(eval_prop(f, v));
  }
  return out;
}

// Independent oracle for existential projection: v |= exists xs. f iff some
// valuation agreeing with v outside xs satisfies f.
bool exists_projection_oracle(Formula f, const Signature& xs, const Valuation& v) {
  std::vector<Atom> bound;
  for (const Atom& a : signature_of(f))
    if (xs.count(a)) bound.push_back(a);
  uint64_t total = uint64_t{1} << bound.size();
  for (uint64_t idx = 0; idx < total; ++idx) {
    Valuation full = v;
    for (size_t i = 0; i < bound.size(); ++i) full[bound[i]] = (idx >> i) & 1;
    if (eval_prop(f, full)) return true;
  }
  return false;
}

void check_forget_against_oracle(Formula f, const Signature& xs) {
  Formula projected = forget(f, xs);
  for (const Atom& a : signature_of(projected)) {
    REQUIRE(signature_of(f).count(a) == 1);
    REQUIRE(xs.count(a) == 0);
  }
  std::vector<Atom> kept;
  for (const Atom& a : signature_of(f))
    if (!xs.count(a)) kept.push_back(a);
  uint64_t total = uint64_t{1} << kept.size();
  for (uint64_t idx = 0; idx < total; ++idx) {
    Valuation v;
    for (size_t i = 0; i < kept.size(); ++i) v[kept[i]] = (idx >> i) & 1;
    REQUIRE(eval_prop(projected, v) == exists_projection_oracle(f, xs, v));
  }
}

}  // namespace

TEST_CASE("tautology checking") {
  REQUIRE(is_tautology(parse_formula("p | ~p")));
  REQUIRE(!is_tautology(parse_formula("p")));
  REQUIRE(is_tautology(parse_formula("(p -> q) -> (~q -> ~p)")));
  REQUIRE_THROWS_AS(is_tautology(parse_formula("[]p")), ModalOperatorError);

  auto counter = find_countervaluation(parse_formula("p -> q"));
  REQUIRE(counter.has_value());
  REQUIRE(counter->at(Atom::plain("p")) == true);
  REQUIRE(counter->at(Atom::plain("q")) == false);
}

TEST_CASE("tautology budget") {
  Budgets tiny;
  tiny.valuations = 4;
  REQUIRE_THROWS_AS(is_tautology(parse_formula("p & q & r"), tiny), BudgetExceeded);
}

TEST_CASE("forget examples") {
  Signature q{Atom::plain("q")}, p{Atom::plain("p")};
  REQUIRE(prop_equivalent(forget(parse_formula("p & q"), q), parse_formula("p")));
  REQUIRE(prop_equivalent(forget(parse_formula("p <-> q"), p), Formula::top()));
  REQUIRE(prop_equivalent(forget(parse_formula("p & ~p"), p), Formula::bot()));
  REQUIRE_THROWS_AS(forget(parse_formula("<>p"), p), ModalOperatorError);
}

TEST_CASE("forget agrees with brute-force projection on a seeded corpus") {
  std::mt19937 rng(424242);
  std::vector<std::string> names{"p", "q", "r", "s"};
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    Formula f = testutil::random_formula(rng, 4, names, false);
    std::vector<Atom> sig = atom_vec(signature_of(f));
    if (sig.size() > 4) continue;
    // every subset of sig(f)
    for (uint64_t mask = 0; mask < (uint64_t{1} << sig.size()); ++mask) {
      Signature xs;
      for (size_t b = 0; b < sig.size(); ++b)
        if ((mask >> b) & 1) xs.insert(sig[b]);
      check_forget_against_oracle(f, xs);
      ++checked;
    }
  }
  REQUIRE(checked > 1000);
}

TEST_CASE("uniform interpolant examples") {
  Signature p{Atom::plain("p")};
  REQUIRE(prop_equivalent(prop_uniform_interpolant(parse_formula("p & q"), p),
                          parse_formula("p")));
  REQUIRE(prop_equivalent(prop_uniform_interpolant(parse_formula("p | q"), {}),
                          Formula::top()));
}

TEST_CASE("uniform interpolant contract on random formulas") {
  std::mt19937 rng(1337);
  std::vector<std::string> names{"p", "q", "r", "s"};
  for (int i = 0; i < 150; ++i) {
    Formula f = testutil::random_formula(rng, 3, names, false);
    std::vector<Atom> sig = atom_vec(signature_of(f));
    Signature sigma;
    for (size_t b = 0; b < sig.size(); ++b)
      if (rng() % 2) sigma.insert(sig[b]);
    Formula chi = prop_uniform_interpolant(f, sigma);
    REQUIRE(is_tautology(Formula::implies(f, chi)));
    for (const Atom& a : signature_of(chi)) REQUIRE(sigma.count(a) == 1);
    // maximality: any consequent of f over sigma plus fresh atoms follows
    // from chi; checked against random candidates.
    for (int j = 0; j < 10; ++j) {
      Formula psi = testutil::random_formula(rng, 3, {"p", "q", "r", "s", "t"}, false);
      bool shares_outside = false;
      for (const Atom& a : signature_of(psi))
        if (signature_of(f).count(a) && !sigma.count(a)) shares_outside = true;
      if (shares_outside) continue;
      if (is_tautology(Formula::implies(f, psi)))
        REQUIRE(is_tautology(Formula::implies(chi, psi)));
    }
  }
}

TEST_CASE("craig interpolant examples") {
  Formula chi = prop_craig_interpolant(parse_formula("p & q"), parse_formula("p | r"));
  REQUIRE(prop_equivalent(chi, parse_formula("p")));
  REQUIRE(prop_equivalent(prop_craig_interpolant(parse_formula("p"), parse_formula("p")),
                          parse_formula("p")));
  REQUIRE(prop_equivalent(
      prop_craig_interpolant(Formula::bot(), parse_formula("q")), Formula::bot()));

  try {
    prop_craig_interpolant(parse_formula("p"), parse_formula("q"));
    FAIL("expected NotValidImplication");
  } catch (const NotValidImplication& e) {
    REQUIRE(e.counter.at(Atom::plain("p")) == true);
    REQUIRE(e.counter.at(Atom::plain("q")) == false);
  }
}

TEST_CASE("craig contract on 500 random valid implications") {
  std::mt19937 rng(555);
  std::vector<std::string> names{"p", "q", "r", "s", "t"};
  int done = 0;
  while (done < 500) {
    Formula f = testutil::random_formula(rng, 3, names, false);
    Formula g;
    switch (rng() % 3) {
      case 0: g = Formula::disj(f, testutil::random_formula(rng, 2, names, false)); break;
      case 1: {
        g = testutil::random_formula(rng, 3, names, false);
        f = Formula::conj(g, testutil::random_formula(rng, 2, names, false));
        break;
      }
      default: g = testutil::random_formula(rng, 3, names, false); break;
    }
    if (!is_tautology(Formula::implies(f, g))) continue;
    Formula chi = prop_craig_interpolant(f, g);
    REQUIRE(is_tautology(Formula::implies(f, chi)));
    REQUIRE(is_tautology(Formula::implies(chi, g)));
    Signature shared;
    for (const Atom& a : signature_of(f))
      if (signature_of(g).count(a)) shared.insert(a);
    for (const Atom& a : signature_of(chi)) REQUIRE(shared.count(a) == 1);
    ++done;
  }
}

TEST_CASE("prop equivalence") {
  REQUIRE(prop_equivalent(parse_formula("p & q"), parse_formula("q & p")));
  REQUIRE(!prop_equivalent(parse_formula("p"), parse_formula("q")));
  Signature q{Atom::plain("q")};
  REQUIRE(prop_equivalent(forget(parse_formula("p & q"), q), parse_formula("p")));
}

TEST_CASE("simplify examples") {
  REQUIRE(simplify(Formula::conj(Formula::top(), Formula::atom("p"))) ==
          Formula::atom("p"));
  REQUIRE(simplify(parse_formula("p | p & q")) == Formula::atom("p"));
  REQUIRE(simplify(parse_formula("p & ~p | q")) == Formula::atom("q"));
  REQUIRE(simplify(parse_formula("p & ~p")) == Formula::bot());
  REQUIRE(simplify(parse_formula("p | ~p")) == Formula::top());
  REQUIRE(simplify(parse_formula("p & (p -> q)")) ==
          Formula::conj(Formula::atom("p"), Formula::atom("q")));
}

TEST_CASE("simplify preserves equivalence, size, and is idempotent") {
  std::mt19937 rng(31415);
  std::vector<std::string> names{"p", "q", "r", "s", "t", "u"};
  for (int i = 0; i < 1000; ++i) {
    Formula f = testutil::random_formula(rng, 4, names, false);
    Formula s = simplify(f);
    CAPTURE(render(f), render(s));
    REQUIRE(dag_size(s) <= dag_size(f));
    REQUIRE(prop_equivalent(f, s));
    REQUIRE(simplify(s) == s);
  }
}

TEST_CASE("simplify is sound on modal formulas") {
  std::mt19937 rng(2718);
  PointedFrame fork("fork2", {"0", "1", "2"}, {{"0", "1"}, {"0", "2"}}, "0");
  Signature sigma{Atom::plain("p"), Atom::plain("q"), Atom::plain("r")};
  for (int i = 0; i < 400; ++i) {
    Formula f = testutil::random_formula(rng, 4, {"p", "q", "r"}, true);
    Formula s = simplify(f);
    REQUIRE(dag_size(s) <= dag_size(f));
    Model m = testutil::random_model(rng, fork, sigma);
    for (const WorldId& w : fork.worlds())
      REQUIRE(satisfies(m, w, f) == satisfies(m, w, s));
  }
}
