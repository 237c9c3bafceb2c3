#include "gcq/ccq.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <unordered_map>

#include "gcq/error.hpp"

namespace gcq::ccq {

// ---------------------------------------------------------------------------
// Formula

Formula::Formula() : node_(std::make_shared<const Node>(Top{})) {}
Formula::Formula(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

Formula Formula::top() { return Formula(); }
Formula Formula::conj(Formula lhs, Formula rhs) { return Formula(Node(Conj{std::move(lhs), std::move(rhs)})); }
Formula Formula::eq(Var i, Var j) { return Formula(Node(Eq{i, j})); }
Formula Formula::rel(std::string symbol, std::vector<Var> args) {
  return Formula(Node(Rel{std::move(symbol), std::move(args)}));
}
Formula Formula::exists(Var bound, Formula body) { return Formula(Node(Exists{bound, std::move(body)})); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  if (a.as<Formula::Top>()) return true;
  if (auto* c = a.as<Formula::Conj>()) {
    auto* d = b.as<Formula::Conj>();
    return c->lhs == d->lhs && c->rhs == d->rhs;
  }
  if (auto* e = a.as<Formula::Eq>()) {
    auto* f = b.as<Formula::Eq>();
    return e->lhs == f->lhs && e->rhs == f->rhs;
  }
  if (auto* r = a.as<Formula::Rel>()) {
    auto* s = b.as<Formula::Rel>();
    return r->symbol == s->symbol && r->args == s->args;
  }
  auto* x = a.as<Formula::Exists>();
  auto* y = b.as<Formula::Exists>();
  return x->bound == y->bound && x->body == y->body;
}

namespace {

void collect_free(const Formula& f, std::vector<Var>& bound, std::set<Var>& out) {
  auto add = [&](Var v) {
    if (std::ranges::find(bound, v) == bound.end()) out.insert(v);
  };
  if (auto* c = f.as<Formula::Conj>()) {
    collect_free(c->lhs, bound, out);
    collect_free(c->rhs, bound, out);
  } else if (auto* e = f.as<Formula::Eq>()) {
    add(e->lhs);
    add(e->rhs);
  } else if (auto* r = f.as<Formula::Rel>()) {
    for (Var v : r->args) add(v);
  } else if (auto* x = f.as<Formula::Exists>()) {
    bound.push_back(x->bound);
    collect_free(x->body, bound, out);
    bound.pop_back();
  }
}

void collect_max(const Formula& f, std::optional<Var>& best) {
  auto see = [&](Var v) {
    if (!best || v > *best) best = v;
  };
  if (auto* c = f.as<Formula::Conj>()) {
    collect_max(c->lhs, best);
    collect_max(c->rhs, best);
  } else if (auto* e = f.as<Formula::Eq>()) {
    see(e->lhs);
    see(e->rhs);
  } else if (auto* r = f.as<Formula::Rel>()) {
    for (Var v : r->args) see(v);
  } else if (auto* x = f.as<Formula::Exists>()) {
    see(x->bound);
    collect_max(x->body, best);
  }
}

}  // namespace

std::set<Var> free_vars(const Formula& f) {
  std::vector<Var> bound;
  std::set<Var> out;
  collect_free(f, bound, out);
  return out;
}

std::optional<Var> max_var(const Formula& f) {
  std::optional<Var> best;
  collect_max(f, best);
  return best;
}

namespace {

Formula subst(const Formula& f, const std::map<Var, Var>& m, Var& fresh) {
  if (m.empty()) return f;
  auto map = [&](Var v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  if (auto* c = f.as<Formula::Conj>()) return Formula::conj(subst(c->lhs, m, fresh), subst(c->rhs, m, fresh));
  if (auto* e = f.as<Formula::Eq>()) return Formula::eq(map(e->lhs), map(e->rhs));
  if (auto* r = f.as<Formula::Rel>()) {
    std::vector<Var> args;
    for (Var v : r->args) args.push_back(map(v));
    return Formula::rel(r->symbol, std::move(args));
  }
  if (auto* x = f.as<Formula::Exists>()) {
    std::map<Var, Var> inner = m;
    inner.erase(x->bound);
    std::set<Var> fv = free_vars(x->body);
    bool captures = std::ranges::any_of(inner, [&](const auto& kv) {
      return kv.second == x->bound && fv.contains(kv.first);
    });
    Var b = x->bound;
    if (captures) {
      b = fresh++;
      inner[x->bound] = b;
    }
    return Formula::exists(b, subst(x->body, inner, fresh));
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::vector<std::pair<Var, Var>>& pairs) {
  std::map<Var, Var> m;
  Var fresh = 0;
  if (auto mv = max_var(f)) fresh = *mv + 1;
  for (const auto& [replacement, replaced] : pairs) {
    if (replacement != replaced) m[replaced] = replacement;
    fresh = std::max({fresh, replacement + 1, replaced + 1});
  }
  return subst(f, m, fresh);
}

namespace {

using BinderStack = std::vector<std::pair<Var, Var>>;

// Position of v among a's binders (innermost first), or -1 when free.
long lookup(const BinderStack& stack, Var v, bool left) {
  for (std::size_t i = stack.size(); i-- > 0;) {
    if ((left ? stack[i].first : stack[i].second) == v) return static_cast<long>(i);
  }
  return -1;
}

bool same_var(const BinderStack& stack, Var a, Var b) {
  long i = lookup(stack, a, true);
  long j = lookup(stack, b, false);
  if (i != j) return false;
  return i >= 0 || a == b;
}

bool alpha(const Formula& a, const Formula& b, BinderStack& stack) {
  if (a.node().index() != b.node().index()) return false;
  if (a.as<Formula::Top>()) return true;
  if (auto* c = a.as<Formula::Conj>()) {
    auto* d = b.as<Formula::Conj>();
    return alpha(c->lhs, d->lhs, stack) && alpha(c->rhs, d->rhs, stack);
  }
  if (auto* e = a.as<Formula::Eq>()) {
    auto* f = b.as<Formula::Eq>();
    return same_var(stack, e->lhs, f->lhs) && same_var(stack, e->rhs, f->rhs);
  }
  if (auto* r = a.as<Formula::Rel>()) {
    auto* s = b.as<Formula::Rel>();
    if (r->symbol != s->symbol || r->args.size() != s->args.size()) return false;
    for (std::size_t i = 0; i < r->args.size(); ++i)
      if (!same_var(stack, r->args[i], s->args[i])) return false;
    return true;
  }
  auto* x = a.as<Formula::Exists>();
  auto* y = b.as<Formula::Exists>();
  stack.emplace_back(x->bound, y->bound);
  bool ok = alpha(x->body, y->body, stack);
  stack.pop_back();
  return ok;
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  BinderStack stack;
  return alpha(a, b, stack);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

struct Printer {
  const std::function<std::string(Var)>& free_name;
  std::vector<std::pair<Var, std::string>> scope;

  std::string name(Var v) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == v) return it->second;
    return free_name(v);
  }

  std::string operand(const Formula& f, bool right) {
    bool wrap = f.as<Formula::Eq>() || f.as<Formula::Exists>() || (right && f.as<Formula::Conj>());
    std::string s = print(f);
    return wrap ? "(" + s + ")" : s;
  }

  std::string print(const Formula& f) {
    if (f.as<Formula::Top>()) return "top";
    if (auto* c = f.as<Formula::Conj>()) return operand(c->lhs, false) + " /\\ " + operand(c->rhs, true);
    if (auto* e = f.as<Formula::Eq>()) return name(e->lhs) + " = " + name(e->rhs);
    if (auto* r = f.as<Formula::Rel>()) {
      std::string s = r->symbol + "(";
      for (std::size_t i = 0; i < r->args.size(); ++i) s += (i ? ", " : "") + name(r->args[i]);
      return s + ")";
    }
    auto* x = f.as<Formula::Exists>();
    std::string z = "z" + std::to_string(scope.size());
    scope.emplace_back(x->bound, z);
    std::string s = "exists " + z + ". " + print(x->body);
    scope.pop_back();
    return s;
  }
};

}  // namespace

std::string to_string(const Formula& f, const std::function<std::string(Var)>& free_name) {
  Printer p{free_name, {}};
  return p.print(f);
}

std::string to_string(const Formula& f) {
  return to_string(f, [](Var v) { return "x" + std::to_string(v); });
}

std::string to_string(const Judgment& j) { return std::to_string(j.context) + " |- " + to_string(j.formula); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { Ident, Number, Turnstile, And, Eq, LParen, RParen, Comma, Dot, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
    } else if (s.substr(i, 2) == "|-") {
      out.push_back({Tok::Turnstile, "|-", start});
      i += 2;
    } else if (s.substr(i, 2) == "/\\") {
      out.push_back({Tok::And, "/\\", start});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '=': k = Tok::Eq; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case '.': k = Tok::Dot; break;
        default:
          throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i));
      }
      out.push_back({k, std::string(1, c), start});
      ++i;
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> toks, std::size_t start, const Signature& sig, const FreeVarResolver& free_var,
                Var first_bound)
      : toks_(std::move(toks)), pos_(start), sig_(sig), free_var_(free_var), first_bound_(first_bound) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("trailing input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(peek().pos) +
                     (peek().kind == Tok::End ? " (end of input)" : " near '" + peek().text + "'"));
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  Formula formula() {
    Formula f = atom();
    while (peek().kind == Tok::And) {
      ++pos_;
      f = Formula::conj(std::move(f), atom());
    }
    return f;
  }

  Var variable() {
    if (peek().kind != Tok::Ident) fail("expected a variable");
    std::string name = take().text;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    if (auto v = free_var_(name)) return *v;
    --pos_;
    fail("unknown or out-of-context variable '" + name + "'");
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) fail("expected a formula");
    if (t.text == "top") {
      ++pos_;
      return Formula::top();
    }
    if (t.text == "exists") {
      ++pos_;
      if (peek().kind != Tok::Ident) fail("expected a bound variable name");
      std::string name = peek().text;
      bool clash = sig_.contains(name) || name == "top" || name == "exists" || free_var_(name).has_value() ||
                   std::ranges::any_of(scope_, [&](const auto& s) { return s.first == name; });
      if (clash) fail("binder '" + name + "' shadows a name already in scope");
      ++pos_;
      expect(Tok::Dot, "'.'");
      Var b = first_bound_ + static_cast<Var>(scope_.size());
      scope_.emplace_back(name, b);
      Formula body = formula();
      scope_.pop_back();
      return Formula::exists(b, std::move(body));
    }
    if (toks_[pos_ + 1].kind == Tok::LParen) {
      std::string sym = take().text;
      if (!sig_.contains(sym)) {
        --pos_;
        throw SignatureError("unknown symbol: " + sym);
      }
      ++pos_;
      std::vector<Var> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(variable());
        while (peek().kind == Tok::Comma) {
          ++pos_;
          args.push_back(variable());
        }
      }
      expect(Tok::RParen, "')'");
      Sort s = sig_.sort_of(sym);
      if (s.m != 0) throw SignatureError("symbol " + sym + " has nonzero coarity; not a CCQ symbol");
      if (args.size() != s.n)
        throw SignatureError("symbol " + sym + " expects " + std::to_string(s.n) + " arguments, got " +
                             std::to_string(args.size()));
      return Formula::rel(sym, std::move(args));
    }
    Var lhs = variable();
    expect(Tok::Eq, "'='");
    Var rhs = variable();
    return Formula::eq(lhs, rhs);
  }

  std::vector<Token> toks_;
  std::size_t pos_;
  const Signature& sig_;
  const FreeVarResolver& free_var_;
  Var first_bound_;
  std::vector<std::pair<std::string, Var>> scope_;
};

std::optional<Var> indexed_name(std::string_view name, char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  Var v = 0;
  auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), v);
  if (ec != std::errc() || p != name.data() + name.size()) return std::nullopt;
  return v;
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig, const FreeVarResolver& free_var,
                      Var first_bound) {
  FormulaParser p(lex(text), 0, sig, free_var, first_bound);
  return p.parse_all();
}

Judgment parse_ccq(std::string_view text, const Signature& sig) {
  auto toks = lex(text);
  if (toks[0].kind != Tok::Number) throw ParseError("expected context size at start of judgment");
  std::size_t n = 0;
  std::from_chars(toks[0].text.data(), toks[0].text.data() + toks[0].text.size(), n);
  if (toks[1].kind != Tok::Turnstile) throw ParseError("expected '|-' after context size");
  FreeVarResolver resolve = [n](std::string_view name) -> std::optional<Var> {
    auto v = indexed_name(name, 'x');
    if (v && *v < n) return v;
    return std::nullopt;
  };
  FormulaParser p(std::move(toks), 2, sig, resolve, static_cast<Var>(n));
  Judgment j{n, p.parse_all()};
  validate(j, sig);
  return j;
}

namespace {

void validate_symbols(const Formula& f, const Signature& sig) {
  if (auto* c = f.as<Formula::Conj>()) {
    validate_symbols(c->lhs, sig);
    validate_symbols(c->rhs, sig);
  } else if (auto* r = f.as<Formula::Rel>()) {
    Sort s = sig.sort_of(r->symbol);
    if (s.m != 0) throw SignatureError("symbol " + r->symbol + " has nonzero coarity");
    if (r->args.size() != s.n) throw SignatureError("arity mismatch for symbol " + r->symbol);
  } else if (auto* x = f.as<Formula::Exists>()) {
    validate_symbols(x->body, sig);
  }
}

}  // namespace

void validate(const Judgment& j, const Signature& sig) {
  for (Var v : free_vars(j.formula))
    if (v >= j.context)
      throw ParseError("free variable x" + std::to_string(v) + " outside context " + std::to_string(j.context));
  validate_symbols(j.formula, sig);
}

// ---------------------------------------------------------------------------
// Derivations

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Top: return "top";
    case Rule::Sigma: return "sigma";
    case Rule::Exists: return "exists";
    case Rule::Eq: return "eq";
    case Rule::Conj: return "conj";
    case Rule::Swap: return "sw";
    case Rule::Ident: return "id";
    case Rule::New: return "nu";
  }
  return "?";
}

Derivation::Derivation(Rule rule, std::size_t context, Formula conclusion, std::vector<Derivation> premises)
    : rule_(rule), context_(context), conclusion_(std::move(conclusion)), premises_(std::move(premises)) {}

Derivation Derivation::top() { return Derivation(Rule::Top, 0, Formula::top(), {}); }

Derivation Derivation::sigma(std::string symbol, std::size_t arity) {
  std::vector<Var> args(arity);
  for (std::size_t i = 0; i < arity; ++i) args[i] = static_cast<Var>(i);
  Derivation d(Rule::Sigma, arity, Formula::rel(symbol, std::move(args)), {});
  d.param_ = arity;
  d.symbol_ = std::move(symbol);
  return d;
}

Derivation Derivation::eq() { return Derivation(Rule::Eq, 2, Formula::eq(0, 1), {}); }

Derivation Derivation::exists(Derivation premise) {
  std::size_t n = premise.context_;
  if (n == 0) throw Error("exists rule needs a nonempty context");
  Formula f = Formula::exists(static_cast<Var>(n - 1), premise.conclusion_);
  return Derivation(Rule::Exists, n - 1, std::move(f), {std::move(premise)});
}

Derivation Derivation::conj(Derivation lhs, Derivation rhs) {
  std::size_t m = lhs.context_;
  std::size_t n = rhs.context_;
  std::vector<std::pair<Var, Var>> shift;
  for (std::size_t i = 0; i < n; ++i) shift.emplace_back(static_cast<Var>(m + i), static_cast<Var>(i));
  Formula f = Formula::conj(lhs.conclusion_, substitute(rhs.conclusion_, shift));
  return Derivation(Rule::Conj, m + n, std::move(f), {std::move(lhs), std::move(rhs)});
}

Derivation Derivation::swap(Derivation premise, std::size_t k) {
  std::size_t n = premise.context_;
  if (k + 1 >= n) throw Error("swap position out of range");
  Var a = static_cast<Var>(k);
  Var b = static_cast<Var>(k + 1);
  Formula f = substitute(premise.conclusion_, {{b, a}, {a, b}});
  Derivation d(Rule::Swap, n, std::move(f), {std::move(premise)});
  d.param_ = k;
  return d;
}

Derivation Derivation::ident(Derivation premise) {
  std::size_t n = premise.context_;
  if (n < 2) throw Error("identification rule needs two variables");
  Formula f = substitute(premise.conclusion_, {{static_cast<Var>(n - 2), static_cast<Var>(n - 1)}});
  return Derivation(Rule::Ident, n - 1, std::move(f), {std::move(premise)});
}

Derivation Derivation::fresh(Derivation premise) {
  std::size_t n = premise.context_;
  Formula f = premise.conclusion_;
  return Derivation(Rule::New, n + 1, std::move(f), {std::move(premise)});
}

std::size_t Derivation::node_count() const {
  std::size_t c = 1;
  for (const auto& p : premises_) c += p.node_count();
  return c;
}

namespace {

// Rearranges the context of d so that position p carries target[p]. `labels`
// names the current positions and may repeat; every label must occur in
// target.
Derivation relabel(Derivation d, std::vector<Var> labels, const std::vector<Var>& target) {
  auto sw = [&](std::size_t k) {
    d = Derivation::swap(std::move(d), k);
    std::swap(labels[k], labels[k + 1]);
  };
  while (true) {
    std::size_t i = 0, j = 0;
    bool found = false;
    for (j = 1; j < labels.size() && !found; ++j)
      for (i = 0; i < j; ++i)
        if (labels[i] == labels[j]) {
          found = true;
          break;
        }
    if (!found) break;
    --j;
    for (std::size_t k = j; k + 1 < labels.size(); ++k) sw(k);
    for (std::size_t k = i; k + 2 < labels.size(); ++k) sw(k);
    d = Derivation::ident(std::move(d));
    labels.pop_back();
  }
  for (Var t : target) {
    if (std::ranges::find(labels, t) == labels.end()) {
      d = Derivation::fresh(std::move(d));
      labels.push_back(t);
    }
  }
  if (labels.size() != target.size()) throw Error("relabel: label outside target");
  for (std::size_t p = 0; p < target.size(); ++p) {
    std::size_t q = static_cast<std::size_t>(std::ranges::find(labels, target[p]) - labels.begin());
    for (; q > p; --q) sw(q - 1);
  }
  return d;
}

std::vector<Var> first_occurrence(const std::vector<Var>& vs) {
  std::vector<Var> out;
  for (Var v : vs)
    if (std::ranges::find(out, v) == out.end()) out.push_back(v);
  return out;
}

std::pair<Derivation, std::vector<Var>> core(const Formula& f) {
  if (f.as<Formula::Top>()) return {Derivation::top(), {}};
  if (auto* e = f.as<Formula::Eq>()) {
    if (e->lhs == e->rhs) return {Derivation::ident(Derivation::eq()), {e->lhs}};
    return {Derivation::eq(), {e->lhs, e->rhs}};
  }
  if (auto* r = f.as<Formula::Rel>()) {
    auto vars = first_occurrence(r->args);
    return {relabel(Derivation::sigma(r->symbol, r->args.size()), r->args, vars), vars};
  }
  if (auto* c = f.as<Formula::Conj>()) {
    auto [dl, vl] = core(c->lhs);
    auto [dr, vr] = core(c->rhs);
    std::vector<Var> labels = vl;
    labels.insert(labels.end(), vr.begin(), vr.end());
    auto vars = first_occurrence(labels);
    return {relabel(Derivation::conj(std::move(dl), std::move(dr)), labels, vars), vars};
  }
  auto* x = f.as<Formula::Exists>();
  auto [d, vars] = core(x->body);
  if (std::ranges::find(vars, x->bound) == vars.end())
    return {Derivation::exists(Derivation::fresh(std::move(d))), vars};
  std::vector<Var> rest;
  for (Var v : vars)
    if (v != x->bound) rest.push_back(v);
  std::vector<Var> target = rest;
  target.push_back(x->bound);
  return {Derivation::exists(relabel(std::move(d), vars, target)), rest};
}

}  // namespace

Derivation derive(const Judgment& j) {
  for (Var v : free_vars(j.formula))
    if (v >= j.context) throw Error("free variable x" + std::to_string(v) + " outside context");
  auto [d, vars] = core(j.formula);
  std::vector<Var> target(j.context);
  for (std::size_t i = 0; i < j.context; ++i) target[i] = static_cast<Var>(i);
  return relabel(std::move(d), vars, target);
}

// ---------------------------------------------------------------------------
// Semantics

namespace {

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = t.size();
    for (Element e : t) h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Satisfying assignments of the free variables `vars` (sorted ascending).
struct Table {
  std::vector<Var> vars;
  std::vector<Tuple> rows;
};

void normalize(std::vector<Tuple>& rows) {
  std::ranges::sort(rows);
  auto dup = std::ranges::unique(rows);
  rows.erase(dup.begin(), dup.end());
}

const Relation& symbol_relation(const RelModel& model, const std::string& symbol, std::size_t arity) {
  const Relation& r = model.rho(symbol);
  if (r.sort().m != 0 || r.sort().n != arity)
    throw SignatureError("model interprets " + symbol + " at sort " + to_string(r.sort()) + ", query uses arity " +
                         std::to_string(arity));
  return r;
}

Table join(const Table& a, const Table& b) {
  Table out;
  std::ranges::set_union(a.vars, b.vars, std::back_inserter(out.vars));
  std::vector<std::size_t> shared_a, shared_b, only_b;
  for (std::size_t j = 0; j < b.vars.size(); ++j) {
    auto it = std::ranges::find(a.vars, b.vars[j]);
    if (it == a.vars.end()) {
      only_b.push_back(j);
    } else {
      shared_a.push_back(static_cast<std::size_t>(it - a.vars.begin()));
      shared_b.push_back(j);
    }
  }
  std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash> index;
  for (const Tuple& r : b.rows) {
    Tuple key;
    for (std::size_t j : shared_b) key.push_back(r[j]);
    index[key].push_back(&r);
  }
  for (const Tuple& r : a.rows) {
    Tuple key;
    for (std::size_t i : shared_a) key.push_back(r[i]);
    auto it = index.find(key);
    if (it == index.end()) continue;
    for (const Tuple* s : it->second) {
      Tuple row(out.vars.size());
      for (std::size_t i = 0; i < a.vars.size(); ++i)
        row[static_cast<std::size_t>(std::ranges::find(out.vars, a.vars[i]) - out.vars.begin())] = r[i];
      for (std::size_t j : only_b)
        row[static_cast<std::size_t>(std::ranges::find(out.vars, b.vars[j]) - out.vars.begin())] = (*s)[j];
      out.rows.push_back(std::move(row));
    }
  }
  normalize(out.rows);
  return out;
}

Table eval_table(const Formula& f, const RelModel& model) {
  const std::size_t X = model.size();
  if (f.as<Formula::Top>()) return {{}, {Tuple{}}};
  if (auto* e = f.as<Formula::Eq>()) {
    Table t;
    if (e->lhs == e->rhs) {
      t.vars = {e->lhs};
      for (Element v = 0; v < X; ++v) t.rows.push_back({v});
    } else {
      t.vars = {std::min(e->lhs, e->rhs), std::max(e->lhs, e->rhs)};
      for (Element v = 0; v < X; ++v) t.rows.push_back({v, v});
    }
    return t;
  }
  if (auto* r = f.as<Formula::Rel>()) {
    const Relation& rel = symbol_relation(model, r->symbol, r->args.size());
    Table t;
    t.vars = r->args;
    std::ranges::sort(t.vars);
    auto dup = std::ranges::unique(t.vars);
    t.vars.erase(dup.begin(), dup.end());
    for (const auto& [in, out] : rel.pairs()) {
      Tuple row(t.vars.size());
      std::vector<bool> set(t.vars.size(), false);
      bool ok = true;
      for (std::size_t i = 0; i < in.size() && ok; ++i) {
        auto p = static_cast<std::size_t>(std::ranges::find(t.vars, r->args[i]) - t.vars.begin());
        if (set[p] && row[p] != in[i]) ok = false;
        row[p] = in[i];
        set[p] = true;
      }
      if (ok) t.rows.push_back(std::move(row));
    }
    normalize(t.rows);
    return t;
  }
  if (auto* c = f.as<Formula::Conj>()) return join(eval_table(c->lhs, model), eval_table(c->rhs, model));
  auto* x = f.as<Formula::Exists>();
  Table body = eval_table(x->body, model);
  auto it = std::ranges::find(body.vars, x->bound);
  if (it == body.vars.end()) {
    if (X == 0) body.rows.clear();
    return body;
  }
  auto p = static_cast<std::size_t>(it - body.vars.begin());
  Table t;
  t.vars = body.vars;
  t.vars.erase(t.vars.begin() + static_cast<std::ptrdiff_t>(p));
  for (Tuple row : body.rows) {
    row.erase(row.begin() + static_cast<std::ptrdiff_t>(p));
    t.rows.push_back(std::move(row));
  }
  normalize(t.rows);
  return t;
}

Relation as_relation(std::size_t n, std::size_t carrier, std::vector<Tuple> rows) {
  RelationBuilder b({n, 0}, carrier);
  for (auto& r : rows) b.add(std::move(r), {});
  return std::move(b).build();
}

}  // namespace

Relation eval_ccq(const Judgment& j, const RelModel& model) {
  for (Var v : free_vars(j.formula))
    if (v >= j.context) throw Error("free variable x" + std::to_string(v) + " outside context");
  Table t = eval_table(j.formula, model);
  std::unordered_map<Tuple, bool, TupleHash> rows;
  for (const Tuple& r : t.rows) rows.emplace(r, true);
  std::vector<Tuple> out;
  Tuple key(t.vars.size());
  for_each_tuple(j.context, model.size(), [&](const Tuple& v) {
    for (std::size_t i = 0; i < t.vars.size(); ++i) key[i] = v[t.vars[i]];
    if (rows.contains(key)) out.push_back(v);
  });
  return as_relation(j.context, model.size(), std::move(out));
}

namespace {

std::vector<Tuple> replay(const Derivation& d, const RelModel& model) {
  const std::size_t X = model.size();
  std::vector<Tuple> out;
  switch (d.rule()) {
    case Rule::Top:
      out.push_back({});
      break;
    case Rule::Sigma:
      for (const auto& [in, o] : symbol_relation(model, d.symbol(), d.param()).pairs()) out.push_back(in);
      break;
    case Rule::Eq:
      for (Element v = 0; v < X; ++v) out.push_back({v, v});
      break;
    case Rule::Exists:
      for (Tuple t : replay(d.premises()[0], model)) {
        t.pop_back();
        out.push_back(std::move(t));
      }
      break;
    case Rule::Conj: {
      auto a = replay(d.premises()[0], model);
      auto b = replay(d.premises()[1], model);
      for (const Tuple& u : a)
        for (const Tuple& v : b) {
          Tuple t = u;
          t.insert(t.end(), v.begin(), v.end());
          out.push_back(std::move(t));
        }
      break;
    }
    case Rule::Swap:
      for (Tuple t : replay(d.premises()[0], model)) {
        std::swap(t[d.param()], t[d.param() + 1]);
        out.push_back(std::move(t));
      }
      break;
    case Rule::Ident:
      for (Tuple t : replay(d.premises()[0], model)) {
        std::size_t n = t.size();
        if (t[n - 1] != t[n - 2]) continue;
        t.pop_back();
        out.push_back(std::move(t));
      }
      break;
    case Rule::New:
      for (const Tuple& t : replay(d.premises()[0], model))
        for (Element v = 0; v < X; ++v) {
          Tuple u = t;
          u.push_back(v);
          out.push_back(std::move(u));
        }
      break;
  }
  normalize(out);
  return out;
}

}  // namespace

Relation eval_derivation(const Derivation& d, const RelModel& model) {
  return as_relation(d.context(), model.size(), replay(d, model));
}

}  // namespace gcq::ccq
