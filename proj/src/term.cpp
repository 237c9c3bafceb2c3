#include "gcq/term.hpp"

#include <cctype>

#include "gcq/error.hpp"

namespace gcq {

Term::Term() : Term(Node{TermKind::Id0, {0, 0}, {}, {}}) {}
Term::Term(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

Term Term::copy() { return Term(Node{TermKind::Copy, {1, 2}, {}, {}}); }
Term Term::discard() { return Term(Node{TermKind::Discard, {1, 0}, {}, {}}); }
Term Term::merge() { return Term(Node{TermKind::Merge, {2, 1}, {}, {}}); }
Term Term::spawn() { return Term(Node{TermKind::Spawn, {0, 1}, {}, {}}); }
Term Term::id0() { return Term(); }
Term Term::id1() { return Term(Node{TermKind::Id1, {1, 1}, {}, {}}); }
Term Term::swap() { return Term(Node{TermKind::Swap, {2, 2}, {}, {}}); }

Term Term::gen(std::string symbol, Sort sort) { return Term(Node{TermKind::Gen, sort, std::move(symbol), {}}); }

Term Term::gen(const Signature& sig, std::string_view symbol) {
  return gen(std::string(symbol), sig.sort_of(symbol));
}

Term Term::seq(Term lhs, Term rhs) {
  if (lhs.sort().m != rhs.sort().n)
    throw SortError("cannot compose " + to_string(lhs.sort()) + " with " + to_string(rhs.sort()) + ": " +
                    std::to_string(lhs.sort().m) + " != " + std::to_string(rhs.sort().n));
  Sort s{lhs.sort().n, rhs.sort().m};
  return Term(Node{TermKind::Seq, s, {}, {std::move(lhs), std::move(rhs)}});
}

Term Term::tensor(Term lhs, Term rhs) {
  Sort s{lhs.sort().n + rhs.sort().n, lhs.sort().m + rhs.sort().m};
  return Term(Node{TermKind::Tensor, s, {}, {std::move(lhs), std::move(rhs)}});
}

std::size_t Term::leaf_count() const {
  if (!is_composite()) return 1;
  return lhs().leaf_count() + rhs().leaf_count();
}

std::size_t Term::gen_count() const {
  if (kind() == TermKind::Gen) return 1;
  if (!is_composite()) return 0;
  return lhs().gen_count() + rhs().gen_count();
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.sort() == b.sort() && a.symbol() == b.symbol() &&
         a.node_->children == b.node_->children;
}

Term tensor_compact(Term lhs, Term rhs) {
  if (lhs.kind() == TermKind::Id0) return rhs;
  if (rhs.kind() == TermKind::Id0) return lhs;
  return Term::tensor(std::move(lhs), std::move(rhs));
}

Term seq_all(const std::vector<Term>& terms) {
  if (terms.empty()) throw SortError("empty composition");
  Term t = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) t = Term::seq(std::move(t), terms[i]);
  return t;
}

Term infer_sort(const RawTerm& raw, const Signature& sig) {
  switch (raw.kind) {
    case TermKind::Copy: return Term::copy();
    case TermKind::Discard: return Term::discard();
    case TermKind::Merge: return Term::merge();
    case TermKind::Spawn: return Term::spawn();
    case TermKind::Id0: return Term::id0();
    case TermKind::Id1: return Term::id1();
    case TermKind::Swap: return Term::swap();
    case TermKind::Gen: return Term::gen(sig, raw.symbol);
    case TermKind::Seq:
      return Term::seq(infer_sort(raw.children.at(0), sig), infer_sort(raw.children.at(1), sig));
    case TermKind::Tensor:
      return Term::tensor(infer_sort(raw.children.at(0), sig), infer_sort(raw.children.at(1), sig));
  }
  throw SortError("unknown term kind");
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  RawTerm parse() {
    RawTerm t = seq();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) != tok) return false;
    i_ += tok.size();
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(i_));
  }

  static RawTerm node(TermKind k, RawTerm a, RawTerm b) {
    RawTerm t;
    t.kind = k;
    t.children = {std::move(a), std::move(b)};
    return t;
  }

  RawTerm seq() {
    RawTerm t = tensor();
    while (eat(";")) t = node(TermKind::Seq, std::move(t), tensor());
    return t;
  }

  RawTerm tensor() {
    RawTerm t = atom();
    while (eat("(+)")) t = node(TermKind::Tensor, std::move(t), atom());
    return t;
  }

  RawTerm atom() {
    skip();
    if (s_.substr(i_, 3) == "(+)") fail("expected a term");
    if (eat("(")) {
      RawTerm t = seq();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) fail("expected a term");
    std::string word(s_.substr(start, i_ - start));
    RawTerm t;
    if (word == "copy") t.kind = TermKind::Copy;
    else if (word == "discard") t.kind = TermKind::Discard;
    else if (word == "merge") t.kind = TermKind::Merge;
    else if (word == "spawn") t.kind = TermKind::Spawn;
    else if (word == "id") t.kind = TermKind::Id1;
    else if (word == "id0") t.kind = TermKind::Id0;
    else if (word == "swap") t.kind = TermKind::Swap;
    else {
      t.kind = TermKind::Gen;
      t.symbol = std::move(word);
    }
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string print_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Copy: return "copy";
    case TermKind::Discard: return "discard";
    case TermKind::Merge: return "merge";
    case TermKind::Spawn: return "spawn";
    case TermKind::Id0: return "id0";
    case TermKind::Id1: return "id";
    case TermKind::Swap: return "swap";
    case TermKind::Gen: return t.symbol();
    case TermKind::Seq: {
      std::string r = print_term(t.rhs());
      if (t.rhs().kind() == TermKind::Seq) r = "(" + r + ")";
      return print_term(t.lhs()) + " ; " + r;
    }
    case TermKind::Tensor: {
      std::string l = print_term(t.lhs());
      std::string r = print_term(t.rhs());
      if (t.lhs().kind() == TermKind::Seq) l = "(" + l + ")";
      if (t.rhs().is_composite()) r = "(" + r + ")";
      return l + " (+) " + r;
    }
  }
  return "?";
}

}  // namespace

Term parse_gcq(std::string_view text, const Signature& sig) { return infer_sort(TermParser(text).parse(), sig); }

std::string print_gcq(const Term& t) { return print_term(t); }

Relation eval_gcq(const Term& t, const RelModel& model) {
  const std::size_t X = model.size();
  switch (t.kind()) {
    case TermKind::Copy: {
      RelationBuilder b({1, 2}, X);
      for (Element v = 0; v < X; ++v) b.add({v}, {v, v});
      return std::move(b).build();
    }
    case TermKind::Discard: {
      RelationBuilder b({1, 0}, X);
      for (Element v = 0; v < X; ++v) b.add({v}, {});
      return std::move(b).build();
    }
    case TermKind::Merge: {
      RelationBuilder b({2, 1}, X);
      for (Element v = 0; v < X; ++v) b.add({v, v}, {v});
      return std::move(b).build();
    }
    case TermKind::Spawn: {
      RelationBuilder b({0, 1}, X);
      for (Element v = 0; v < X; ++v) b.add({}, {v});
      return std::move(b).build();
    }
    case TermKind::Id0: return Relation::unit(X);
    case TermKind::Id1: return Relation::identity(1, X);
    case TermKind::Swap: {
      RelationBuilder b({2, 2}, X);
      for (Element u = 0; u < X; ++u)
        for (Element v = 0; v < X; ++v) b.add({u, v}, {v, u});
      return std::move(b).build();
    }
    case TermKind::Gen: {
      const Relation& r = model.rho(t.symbol());
      if (r.sort() != t.sort())
        throw SignatureError("model interprets " + t.symbol() + " at sort " + to_string(r.sort()) +
                             ", term uses " + to_string(t.sort()));
      return r;
    }
    case TermKind::Seq: return relation_compose(eval_gcq(t.lhs(), model), eval_gcq(t.rhs(), model));
    case TermKind::Tensor: return relation_tensor(eval_gcq(t.lhs(), model), eval_gcq(t.rhs(), model));
  }
  throw SortError("unknown term kind");
}

Term id_n(std::size_t n) {
  Term t;
  for (std::size_t i = 0; i < n; ++i) t = tensor_compact(std::move(t), Term::id1());
  return t;
}

Term n_swap(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) return id_n(n + m);
  if (n == 1 && m == 1) return Term::swap();
  if (n == 1) {
    // swap(1, m) = (swap(1, m-1) ⊕ id) ; (id_{m-1} ⊕ swap)
    return Term::seq(tensor_compact(n_swap(1, m - 1), Term::id1()), tensor_compact(id_n(m - 1), Term::swap()));
  }
  // swap(n, m) = (id_{n-1} ⊕ swap(1, m)) ; (swap(n-1, m) ⊕ id)
  return Term::seq(tensor_compact(id_n(n - 1), n_swap(1, m)), tensor_compact(n_swap(n - 1, m), Term::id1()));
}

Term n_copy(std::size_t n) {
  if (n == 0) return Term::id0();
  if (n == 1) return Term::copy();
  // (copy_{n-1} ⊕ copy) ; (id_{n-1} ⊕ swap(n-1, 1) ⊕ id)
  Term wiring = tensor_compact(tensor_compact(id_n(n - 1), n_swap(n - 1, 1)), Term::id1());
  return Term::seq(tensor_compact(n_copy(n - 1), Term::copy()), wiring);
}

Term n_merge(std::size_t n) {
  if (n == 0) return Term::id0();
  if (n == 1) return Term::merge();
  Term wiring = tensor_compact(tensor_compact(id_n(n - 1), n_swap(1, n - 1)), Term::id1());
  return Term::seq(wiring, tensor_compact(n_merge(n - 1), Term::merge()));
}

Term n_discard(std::size_t n) {
  Term t;
  for (std::size_t i = 0; i < n; ++i) t = tensor_compact(std::move(t), Term::discard());
  return t;
}

Term n_spawn(std::size_t n) {
  Term t;
  for (std::size_t i = 0; i < n; ++i) t = tensor_compact(std::move(t), Term::spawn());
  return t;
}

}  // namespace gcq
