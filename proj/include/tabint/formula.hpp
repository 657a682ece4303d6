#pragma once

// Hash-consed formula DAGs for the modal language built from {true, ~, &, []}
// plus three atom flavors: plain names, world-indexed atoms ("p@w") and frame
// selector atoms ("r@F:w"). Derived connectives (|, ->, <->, <>, false and the
// bounded modalities) normalize into the primitives at construction time, so
// two structurally equal terms are always the identical node.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tabint {

enum class AtomKind { Plain, Indexed, Selector };

// Plain atoms carry just a name. Indexed atoms are (base, world); selector
// atoms identify a pointed frame by (frame, world) and render as "r@F:w".
struct Atom {
  AtomKind kind = AtomKind::Plain;
  std::string base;
  std::string world;
  std::string frame;

  static Atom plain(std::string name) {
    Atom a;
    a.kind = AtomKind::Plain;
    a.base = std::move(name);
    return a;
  }
  static Atom indexed(std::string base, std::string world) {
    Atom a;
    a.kind = AtomKind::Indexed;
    a.base = std::move(base);
    a.world = std::move(world);
    return a;
  }
  static Atom selector(std::string frame, std::string world) {
    Atom a;
    a.kind = AtomKind::Selector;
    a.base = "r";
    a.frame = std::move(frame);
    a.world = std::move(world);
    return a;
  }

  friend bool operator==(const Atom& x, const Atom& y) {
    return x.kind == y.kind && x.base == y.base && x.world == y.world &&
           x.frame == y.frame;
  }
  friend bool operator!=(const Atom& x, const Atom& y) { return !(x == y); }
  friend bool operator<(const Atom& x, const Atom& y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.base != y.base) return x.base < y.base;
    if (x.frame != y.frame) return x.frame < y.frame;
    return x.world < y.world;
  }

  std::string text() const {
    switch (kind) {
      case AtomKind::Plain: return base;
      case AtomKind::Indexed: return base + "@" + world;
      case AtomKind::Selector: return "r@" + frame + ":" + world;
    }
    return base;
  }
};

using Signature = std::set<Atom>;

enum class NodeKind : uint8_t { Top, Atom, Not, And, Box };

class Formula;

namespace detail {

struct Node {
  NodeKind kind;
  uint32_t id;        // creation index; children always have smaller ids
  size_t hash;
  const Node* left = nullptr;
  const Node* right = nullptr;
  Atom atom;          // meaningful only for NodeKind::Atom
};

struct NodeKey {
  NodeKind kind;
  const Node* left;
  const Node* right;
  Atom atom;
  friend bool operator==(const NodeKey& a, const NodeKey& b) {
    return a.kind == b.kind && a.left == b.left && a.right == b.right &&
           a.atom == b.atom;
  }
};

inline size_t hash_combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = static_cast<size_t>(k.kind);
    h = hash_combine(h, reinterpret_cast<size_t>(k.left));
    h = hash_combine(h, reinterpret_cast<size_t>(k.right));
    if (k.kind == NodeKind::Atom) {
      h = hash_combine(h, std::hash<std::string>{}(k.atom.base));
      h = hash_combine(h, std::hash<std::string>{}(k.atom.world));
      h = hash_combine(h, std::hash<std::string>{}(k.atom.frame));
      h = hash_combine(h, static_cast<size_t>(k.atom.kind));
    }
    return h;
  }
};

// Global intern table. Nodes live for the whole process; the table is guarded
// so concurrent construction is safe.
struct InternTable {
  std::mutex mu;
  std::unordered_map<NodeKey, std::unique_ptr<Node>, NodeKeyHash> table;
  uint32_t next_id = 0;

  const Node* intern(NodeKey key) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(key);
    if (it != table.end()) return it->second.get();
    auto node = std::make_unique<Node>();
    node->kind = key.kind;
    node->left = key.left;
    node->right = key.right;
    node->atom = key.atom;
    node->id = next_id++;
    node->hash = NodeKeyHash{}(key);
    const Node* ptr = node.get();
    table.emplace(std::move(key), std::move(node));
    return ptr;
  }
};

inline InternTable& interner() {
  static InternTable table;
  return table;
}

}  // namespace detail

class Formula {
 public:
  Formula() : node_(top().node_) {}

  static Formula top() {
    static const detail::Node* t =
        detail::interner().intern({NodeKind::Top, nullptr, nullptr, Atom{}});
    return Formula(t);
  }
  static Formula bot() { return negation(top()); }

  static Formula atom(Atom a) {
    return Formula(
        detail::interner().intern({NodeKind::Atom, nullptr, nullptr, std::move(a)}));
  }
  static Formula atom(const std::string& name) { return atom(Atom::plain(name)); }

  // Construction-time normalization is limited to ~~f -> f and conjunction
  // with true; anything deeper belongs to the propositional simplifier.
  static Formula negation(Formula f) {
    if (f.kind() == NodeKind::Not) return f.child();
    return Formula(
        detail::interner().intern({NodeKind::Not, f.node_, nullptr, Atom{}}));
  }

  static Formula conj(Formula a, Formula b) {
    if (a.kind() == NodeKind::Top) return b;
    if (b.kind() == NodeKind::Top) return a;
    return Formula(
        detail::interner().intern({NodeKind::And, a.node_, b.node_, Atom{}}));
  }

  static Formula box(Formula f) {
    return Formula(
        detail::interner().intern({NodeKind::Box, f.node_, nullptr, Atom{}}));
  }

  static Formula disj(Formula a, Formula b) {
    return negation(conj(negation(a), negation(b)));
  }
  static Formula implies(Formula a, Formula b) {
    return negation(conj(a, negation(b)));
  }
  static Formula iff(Formula a, Formula b) {
    return conj(implies(a, b), implies(b, a));
  }
  static Formula diamond(Formula f) { return negation(box(negation(f))); }

  template <typename It>
  static Formula conj_all(It first, It last) {
    Formula acc = top();
    for (It it = first; it != last; ++it) acc = conj(acc, *it);
    return acc;
  }
  static Formula conj_all(const std::vector<Formula>& fs) {
    return conj_all(fs.begin(), fs.end());
  }
  static Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
  }

  NodeKind kind() const { return node_->kind; }
  const Atom& atom_value() const { return node_->atom; }
  Formula child() const { return Formula(node_->left); }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  uint32_t id() const { return node_->id; }
  const detail::Node* node() const { return node_; }

  bool is_top() const { return kind() == NodeKind::Top; }
  bool is_bot() const {
    return kind() == NodeKind::Not && child().kind() == NodeKind::Top;
  }

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }
  friend bool operator<(Formula a, Formula b) {
    return a.node_->id < b.node_->id;
  }

 private:
  explicit Formula(const detail::Node* n) : node_(n) {}
  const detail::Node* node_;
  friend struct FormulaHash;
};

struct FormulaHash {
  size_t operator()(Formula f) const {
    return std::hash<const detail::Node*>{}(f.node());
  }
};

// box_upto(f, n) = f & []f & ... & []^n f with shared subterms.
inline Formula box_upto(Formula f, unsigned n) {
  Formula acc = f;
  Formula cur = f;
  for (unsigned i = 1; i <= n; ++i) {
    cur = Formula::box(cur);
    acc = Formula::conj(acc, cur);
  }
  return acc;
}

inline Formula diamond_upto(Formula f, unsigned n) {
  return Formula::negation(box_upto(Formula::negation(f), n));
}

// Distinct reachable nodes, each counted once.
inline std::vector<const detail::Node*> collect_nodes(Formula f) {
  std::vector<const detail::Node*> order;
  std::vector<const detail::Node*> stack{f.node()};
  std::set<const detail::Node*> seen{f.node()};
  while (!stack.empty()) {
    const detail::Node* n = stack.back();
    stack.pop_back();
    order.push_back(n);
    for (const detail::Node* c : {n->left, n->right}) {
      if (c && seen.insert(c).second) stack.push_back(c);
    }
  }
  // Node ids increase from children to parents, so sorting by id yields a
  // topological order with leaves first.
  std::sort(order.begin(), order.end(),
            [](const detail::Node* a, const detail::Node* b) { return a->id < b->id; });
  return order;
}

inline size_t dag_size(Formula f) { return collect_nodes(f).size(); }

inline uint64_t tree_size(Formula f) {
  std::unordered_map<const detail::Node*, uint64_t> memo;
  auto nodes = collect_nodes(f);
  for (const detail::Node* n : nodes) {
    uint64_t s = 1;
    if (n->left) s += memo.at(n->left);
    if (n->right) s += memo.at(n->right);
    memo[n] = s;
  }
  return memo.at(f.node());
}

inline Signature signature_of(Formula f) {
  Signature sig;
  for (const detail::Node* n : collect_nodes(f)) {
    if (n->kind == NodeKind::Atom) sig.insert(n->atom);
  }
  return sig;
}

inline bool is_propositional(Formula f) {
  for (const detail::Node* n : collect_nodes(f)) {
    if (n->kind == NodeKind::Box) return false;
  }
  return true;
}

inline unsigned modal_depth(Formula f) {
  std::unordered_map<const detail::Node*, unsigned> memo;
  for (const detail::Node* n : collect_nodes(f)) {
    unsigned d = 0;
    if (n->left) d = memo.at(n->left);
    if (n->right) d = std::max(d, memo.at(n->right));
    if (n->kind == NodeKind::Box) d += 1;
    memo[n] = d;
  }
  return memo.at(f.node());
}

// Simultaneous substitution of atoms by formulas; atoms outside the map are
// unchanged. Rebuilding goes through the constructors, so sharing and
// construction-time normalization are preserved.
inline Formula substitute(Formula f, const std::map<Atom, Formula>& s) {
  if (s.empty()) return f;
  std::unordered_map<const detail::Node*, Formula> memo;
  auto nodes = collect_nodes(f);
  for (const detail::Node* n : nodes) {
    Formula out = Formula::top();
    switch (n->kind) {
      case NodeKind::Top:
        out = Formula::top();
        break;
      case NodeKind::Atom: {
        auto it = s.find(n->atom);
        out = (it != s.end()) ? it->second : Formula::atom(n->atom);
        break;
      }
      case NodeKind::Not:
        out = Formula::negation(memo.at(n->left));
        break;
      case NodeKind::And:
        out = Formula::conj(memo.at(n->left), memo.at(n->right));
        break;
      case NodeKind::Box:
        out = Formula::box(memo.at(n->left));
        break;
    }
    memo.emplace(n, out);
  }
  return memo.at(f.node());
}

inline std::vector<Formula> conjuncts_of(Formula f) {
  std::vector<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.kind() == NodeKind::And) {
      stack.push_back(g.right());
      stack.push_back(g.left());
    } else {
      out.push_back(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing. Derived connectives are reconstructed from their normal forms so
// output stays readable; reparsing yields the identical node either way.

namespace detail {

// ~(~a & ~b & ... & ~z) with a left-leaning and-spine reads as the flat
// disjunction a | b | ... | z (exactly the shape disj() chains produce);
// other nestings keep their explicit parentheses so reparsing is identity.
inline bool match_or_list(Formula f, std::vector<Formula>& out) {
  if (f.kind() != NodeKind::Not) return false;
  Formula g = f.child();
  if (g.kind() != NodeKind::And) return false;
  std::vector<Formula> rev;
  Formula cur = g;
  while (cur.kind() == NodeKind::And) {
    if (cur.right().kind() != NodeKind::Not) return false;
    rev.push_back(cur.right().child());
    cur = cur.left();
  }
  if (cur.kind() != NodeKind::Not) return false;
  rev.push_back(cur.child());
  out.assign(rev.rbegin(), rev.rend());
  return out.size() >= 2;
}

inline bool match_implies(Formula f, Formula& a, Formula& b) {
  if (f.kind() != NodeKind::Not) return false;
  Formula g = f.child();
  if (g.kind() != NodeKind::And) return false;
  if (g.right().kind() != NodeKind::Not) return false;
  a = g.left();
  b = g.right().child();
  return true;
}

inline bool match_iff(Formula f, Formula& a, Formula& b) {
  if (f.kind() != NodeKind::And) return false;
  Formula x1, y1, x2, y2;
  if (!match_implies(f.left(), x1, y1)) return false;
  if (!match_implies(f.right(), x2, y2)) return false;
  if (x1 == y2 && y1 == x2) {
    a = x1;
    b = y1;
    return true;
  }
  return false;
}

inline bool match_diamond(Formula f, Formula& a) {
  if (f.kind() != NodeKind::Not) return false;
  Formula g = f.child();
  if (g.kind() != NodeKind::Box) return false;
  if (g.child().kind() != NodeKind::Not) return false;
  a = g.child().child();
  return true;
}

// Precedence levels: 5 atoms/prefix, 4 '&', 3 '|', 2 '->', 1 '<->'.
inline void render_rec(Formula f, int parent_prec, std::string& out) {
  Formula a, b;
  if (f.is_top()) {
    out += "true";
    return;
  }
  if (f.is_bot()) {
    out += "false";
    return;
  }
  if (f.kind() == NodeKind::Atom) {
    out += f.atom_value().text();
    return;
  }
  if (match_iff(f, a, b)) {
    bool paren = parent_prec > 1;
    if (paren) out += "(";
    render_rec(a, 2, out);
    out += " <-> ";
    render_rec(b, 2, out);
    if (paren) out += ")";
    return;
  }
  std::vector<Formula> disjuncts;
  if (match_or_list(f, disjuncts)) {
    bool paren = parent_prec > 3;
    if (paren) out += "(";
    render_rec(disjuncts[0], 3, out);
    for (size_t i = 1; i < disjuncts.size(); ++i) {
      out += " | ";
      render_rec(disjuncts[i], 4, out);  // '|' parses left-associative
    }
    if (paren) out += ")";
    return;
  }
  if (match_implies(f, a, b)) {
    bool paren = parent_prec > 2;
    if (paren) out += "(";
    render_rec(a, 3, out);  // '->' is right-associative
    out += " -> ";
    render_rec(b, 2, out);
    if (paren) out += ")";
    return;
  }
  if (match_diamond(f, a)) {
    out += "<>";
    render_rec(a, 5, out);
    return;
  }
  switch (f.kind()) {
    case NodeKind::Not:
      out += "~";
      render_rec(f.child(), 5, out);
      return;
    case NodeKind::Box:
      out += "[]";
      render_rec(f.child(), 5, out);
      return;
    case NodeKind::And: {
      bool paren = parent_prec > 4;
      if (paren) out += "(";
      render_rec(f.left(), 4, out);
      out += " & ";
      render_rec(f.right(), 5, out);  // '&' parses left-associative
      if (paren) out += ")";
      return;
    }
    default:
      throw std::logic_error("render: unreachable node kind");
  }
}

}  // namespace detail

inline std::string render(Formula f) {
  std::string out;
  detail::render_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing.

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)),
        offset(off) {}
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return f;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  // '<->' must be tried before '<>' would misfire; both start with '<'.
  bool peek_iff() {
    skip_ws();
    return text_.substr(pos_, 3) == "<->";
  }
  bool peek_implies() {
    skip_ws();
    return text_.substr(pos_, 2) == "->";
  }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (peek_iff()) {
      pos_ += 3;
      Formula g = parse_implies();
      f = Formula::iff(f, g);
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (peek_implies()) {
      pos_ += 2;
      Formula g = parse_implies();  // right-associative
      return Formula::implies(f, g);
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        f = Formula::disj(f, parse_and());
      } else {
        return f;
      }
    }
  }

  Formula parse_and() {
    Formula f = parse_unary();
    for (;;) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '&') {
        ++pos_;
        f = Formula::conj(f, parse_unary());
      } else {
        return f;
      }
    }
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (text_[pos_] == '~') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (text_.substr(pos_, 2) == "[]") {
      pos_ += 2;
      return Formula::box(parse_unary());
    }
    if (text_.substr(pos_, 3) == "<->")
      throw ParseError("unexpected token '<->'", pos_);
    if (text_.substr(pos_, 2) == "<>") {
      pos_ += 2;
      return Formula::diamond(parse_unary());
    }
    return parse_primary();
  }

  static bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
  static bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  }

  std::string parse_ident_tail() {
    size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) throw ParseError("expected identifier", pos_);
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (text_[pos_] == '(') {
      ++pos_;
      Formula f = parse_iff();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw ParseError("expected ')'", pos_);
      ++pos_;
      return f;
    }
    if (!ident_start(text_[pos_]))
      throw ParseError(std::string("unknown token '") + text_[pos_] + "'", pos_);
    size_t start = pos_;
    std::string name = parse_ident_tail();
    if (name == "true") return Formula::top();
    if (name == "false") return Formula::bot();
    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      std::string first = parse_ident_tail();
      if (pos_ < text_.size() && text_[pos_] == ':') {
        ++pos_;
        std::string second = parse_ident_tail();
        return Formula::atom(Atom::selector(first, second));
      }
      return Formula::atom(Atom::indexed(name, first));
    }
    (void)start;
    return Formula::atom(Atom::plain(name));
  }
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::Parser(text).parse();
}

}  // namespace tabint
