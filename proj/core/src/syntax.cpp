#include "gc2/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "gc2/error.hpp"

namespace gc2 {

namespace {

const std::set<std::string, std::less<>> kKeywords = {
    "and", "or", "not", "imp", "iff", "forall", "exists", "atleast", "atmost",
    "exactly", "=", "true", "false", "x", "y", "nullary", "unary", "binary"};

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

int Signature::arity(std::string_view name) const {
  for (const auto& n : nullary)
    if (n == name) return 0;
  for (const auto& n : unary)
    if (n == name) return 1;
  for (const auto& n : binary)
    if (n == name) return 2;
  return -1;
}

int Signature::unary_index(std::string_view name) const {
  for (std::size_t i = 0; i < unary.size(); ++i)
    if (unary[i] == name) return static_cast<int>(i);
  return -1;
}

int Signature::binary_index(std::string_view name) const {
  for (std::size_t i = 0; i < binary.size(); ++i)
    if (binary[i] == name) return static_cast<int>(i);
  return -1;
}

void Signature::check() const {
  std::set<std::string, std::less<>> seen;
  for (const auto* list : {&nullary, &unary, &binary}) {
    for (const auto& n : *list) {
      if (n.empty() || kKeywords.count(n))
        throw InvalidInput("reserved or empty predicate name '" + n + "'");
      if (!seen.insert(n).second) throw InvalidInput("duplicate predicate name '" + n + "'");
    }
  }
  std::set<std::string, std::less<>> counted;
  for (const auto& c : counting) {
    if (binary_index(c.pred) < 0)
      throw InvalidInput("counting predicate '" + c.pred + "' is not binary");
    if (!counted.insert(c.pred).second)
      throw InvalidInput("counting predicate '" + c.pred + "' repeated");
    if (c.bound < 1) throw InvalidInput("counting bound must be positive");
  }
}

FormulaPtr make_true() {
  static const FormulaPtr t = [] { Formula f; f.op = Op::True; return node(std::move(f)); }();
  return t;
}

FormulaPtr make_false() {
  static const FormulaPtr f = [] { Formula f; f.op = Op::False; return node(std::move(f)); }();
  return f;
}

FormulaPtr make_bool(bool b) { return b ? make_true() : make_false(); }

FormulaPtr make_atom(std::string pred, std::vector<Var> args) {
  Formula f;
  f.op = Op::Atom;
  f.pred = std::move(pred);
  f.args = std::move(args);
  return node(std::move(f));
}

FormulaPtr make_eq(Var a, Var b) {
  if (a == b) return make_true();
  Formula f;
  f.op = Op::Eq;
  f.args = {a, b};
  return node(std::move(f));
}

FormulaPtr raw_node(Op op, std::vector<FormulaPtr> kids) {
  Formula f;
  f.op = op;
  f.kids = std::move(kids);
  return node(std::move(f));
}

FormulaPtr make_not(FormulaPtr f) {
  if (f->op == Op::True) return make_false();
  if (f->op == Op::False) return make_true();
  if (f->op == Op::Not) return f->kids[0];
  return raw_node(Op::Not, {std::move(f)});
}

FormulaPtr make_and(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> out;
  for (auto& k : kids) {
    if (k->op == Op::False) return make_false();
    if (k->op == Op::True) continue;
    out.push_back(std::move(k));
  }
  if (out.empty()) return make_true();
  if (out.size() == 1) return out[0];
  return raw_node(Op::And, std::move(out));
}

FormulaPtr make_or(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> out;
  for (auto& k : kids) {
    if (k->op == Op::True) return make_true();
    if (k->op == Op::False) continue;
    out.push_back(std::move(k));
  }
  if (out.empty()) return make_false();
  if (out.size() == 1) return out[0];
  return raw_node(Op::Or, std::move(out));
}

FormulaPtr make_imp(FormulaPtr a, FormulaPtr b) {
  if (a->op == Op::True) return b;
  if (a->op == Op::False || b->op == Op::True) return make_true();
  if (b->op == Op::False) return make_not(a);
  return raw_node(Op::Imp, {std::move(a), std::move(b)});
}

FormulaPtr make_iff(FormulaPtr a, FormulaPtr b) {
  if (a->op == Op::True) return b;
  if (b->op == Op::True) return a;
  if (a->op == Op::False) return make_not(b);
  if (b->op == Op::False) return make_not(a);
  return raw_node(Op::Iff, {std::move(a), std::move(b)});
}

FormulaPtr make_quant(Op op, Var v, FormulaPtr body) {
  Formula f;
  f.op = op;
  f.var = v;
  f.kids = {std::move(body)};
  return node(std::move(f));
}

FormulaPtr make_counting(Op op, mpz_class bound, Var v, FormulaPtr guard, FormulaPtr body) {
  Formula f;
  f.op = op;
  f.var = v;
  f.bound = std::move(bound);
  f.guard = std::move(guard);
  f.kids = {std::move(body)};
  return node(std::move(f));
}

bool equal(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.op != b.op || a.pred != b.pred || a.args != b.args || a.kids.size() != b.kids.size())
    return false;
  if (a.is_quantifier() && a.var != b.var) return false;
  if (a.is_counting()) {
    if (a.bound != b.bound || !equal(*a.guard, *b.guard)) return false;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

VarMask free_vars(const Formula& f) {
  switch (f.op) {
    case Op::True:
    case Op::False:
      return 0;
    case Op::Atom:
    case Op::Eq: {
      VarMask m = 0;
      for (Var v : f.args) m |= mask_of(v);
      return m;
    }
    default:
      break;
  }
  VarMask m = 0;
  for (const auto& k : f.kids) m |= free_vars(*k);
  if (f.guard) m |= free_vars(*f.guard);
  if (f.is_quantifier()) m &= static_cast<VarMask>(~mask_of(f.var));
  return m;
}

bool has_quantifier(const Formula& f) {
  if (f.is_quantifier()) return true;
  return std::any_of(f.kids.begin(), f.kids.end(), [](const FormulaPtr& k) { return has_quantifier(*k); });
}

bool has_equality(const Formula& f) {
  if (f.op == Op::Eq) return true;
  if (f.guard && has_equality(*f.guard)) return true;
  return std::any_of(f.kids.begin(), f.kids.end(), [](const FormulaPtr& k) { return has_equality(*k); });
}

FormulaPtr swap_vars(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
    case Op::Eq: {
      Formula g = *f;
      for (Var& v : g.args) v = other(v);
      return node(std::move(g));
    }
    default:
      break;
  }
  Formula g = *f;
  for (auto& k : g.kids) k = swap_vars(k);
  if (g.guard) g.guard = swap_vars(g.guard);
  if (g.is_quantifier()) g.var = other(g.var);
  return node(std::move(g));
}

FormulaPtr substitute(const FormulaPtr& f, Var from, Var to) {
  if (from == to) return f;
  switch (f->op) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
    case Op::Eq: {
      Formula g = *f;
      for (Var& v : g.args)
        if (v == from) v = to;
      return node(std::move(g));
    }
    default:
      break;
  }
  if (f->is_quantifier()) {
    if (f->var == from) return f;
    // Binds `to`; the only free variable is `from`, so renaming both is the substitution.
    return swap_vars(f);
  }
  Formula g = *f;
  for (auto& k : g.kids) k = substitute(k, from, to);
  return node(std::move(g));
}

GuardedBody split_guarded(const Formula& q) {
  const FormulaPtr& b = q.kids[0];
  if (q.op == Op::Forall) {
    if (b->op == Op::Imp) return {b->kids[0], b->kids[1]};
    if (b->op == Op::Not && b->kids[0]->op == Op::Atom) return {b->kids[0], make_false()};
  } else if (q.op == Op::Exists) {
    if (b->op == Op::And && b->kids.size() >= 2)
      return {b->kids[0], b->kids.size() == 2 ? b->kids[1] : make_and({b->kids.begin() + 1, b->kids.end()})};
    if (b->op == Op::Atom) return {b, make_true()};
  }
  return {};
}

FormulaPtr simplify(const FormulaPtr& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Eq:
      return f->args[0] == f->args[1] ? make_true() : f;
    case Op::Not:
      return make_not(simplify(f->kids[0]));
    case Op::And:
    case Op::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(simplify(k));
      return f->op == Op::And ? make_and(std::move(kids)) : make_or(std::move(kids));
    }
    case Op::Imp:
      return make_imp(simplify(f->kids[0]), simplify(f->kids[1]));
    case Op::Iff:
      return make_iff(simplify(f->kids[0]), simplify(f->kids[1]));
    case Op::Forall:
    case Op::Exists: {
      auto b = simplify(f->kids[0]);
      if (b->op == Op::True || b->op == Op::False) return b;
      return make_quant(f->op, f->var, b);
    }
    case Op::AtLeast:
    case Op::AtMost:
    case Op::Exactly: {
      auto b = simplify(f->kids[0]);
      if (b->op == Op::False) return make_bool(f->op == Op::AtMost);
      return make_counting(f->op, f->bound, f->var, f->guard, b);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Reader

namespace {

struct Token {
  enum Kind { LParen, RParen, Word, End } kind;
  std::string text;
  std::size_t line, col;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line0) : text_(text), line_(line0 + 1) {}

  Token next() {
    skip();
    if (pos_ >= text_.size()) return {Token::End, "", line_, col_};
    std::size_t l = line_, c = col_;
    char ch = text_[pos_];
    if (ch == '(' || ch == ')') {
      advance();
      return {ch == '(' ? Token::LParen : Token::RParen, std::string(1, ch), l, c};
    }
    std::string w;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      w.push_back(d);
      advance();
    }
    return {Token::Word, w, l, c};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(d))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t col_ = 1;
};

class Reader {
 public:
  Reader(std::string_view text, std::size_t line0, Signature* sig, bool infer)
      : lex_(text, line0), sig_(sig), infer_(infer) {
    tok_ = lex_.next();
  }

  FormulaPtr read_all() {
    auto f = read();
    if (tok_.kind != Token::End) fail("trailing input '" + tok_.text + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok_.line, tok_.col); }

  Token take() {
    Token t = tok_;
    tok_ = lex_.next();
    return t;
  }

  void expect_rparen() {
    if (tok_.kind != Token::RParen) fail("expected ')'");
    take();
  }

  Var read_var() {
    if (tok_.kind != Token::Word) fail("expected variable");
    if (tok_.text == "x") {
      take();
      return Var::x;
    }
    if (tok_.text == "y") {
      take();
      return Var::y;
    }
    fail("variable must be x or y, got '" + tok_.text + "'");
  }

  mpz_class read_bound() {
    if (tok_.kind != Token::Word) fail("expected bound");
    const std::string& w = tok_.text;
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
      fail("bound must be a positive decimal integer");
    mpz_class b(w, 10);
    if (b < 1) fail("bound must be positive");
    take();
    return b;
  }

  FormulaPtr read() {
    if (tok_.kind == Token::Word) {
      if (tok_.text == "true") {
        take();
        return make_true();
      }
      if (tok_.text == "false") {
        take();
        return make_false();
      }
      fail("unexpected word '" + tok_.text + "'");
    }
    if (tok_.kind != Token::LParen) fail("expected '('");
    take();
    if (tok_.kind != Token::Word) fail("expected operator or predicate");
    Token head = take();
    const std::string& h = head.text;
    if (h == "and" || h == "or") {
      std::vector<FormulaPtr> kids;
      while (tok_.kind != Token::RParen) {
        if (tok_.kind == Token::End) fail("unexpected end of input");
        kids.push_back(read());
      }
      if (kids.empty()) fail("'" + h + "' needs at least one argument");
      take();
      return raw_node(h == "and" ? Op::And : Op::Or, std::move(kids));
    }
    if (h == "not") {
      auto a = read();
      expect_rparen();
      return raw_node(Op::Not, {a});
    }
    if (h == "imp" || h == "iff") {
      auto a = read();
      auto b = read();
      expect_rparen();
      return raw_node(h == "imp" ? Op::Imp : Op::Iff, {a, b});
    }
    if (h == "forall" || h == "exists") {
      Var v = read_var();
      auto b = read();
      expect_rparen();
      return make_quant(h == "forall" ? Op::Forall : Op::Exists, v, b);
    }
    if (h == "atleast" || h == "atmost" || h == "exactly") {
      mpz_class bound = read_bound();
      Var v = read_var();
      auto b = read();
      expect_rparen();
      Op op = h == "atleast" ? Op::AtLeast : h == "atmost" ? Op::AtMost : Op::Exactly;
      if (b->op == Op::And && b->kids.size() >= 2) {
        FormulaPtr rest = b->kids.size() == 2
                              ? b->kids[1]
                              : raw_node(Op::And, {b->kids.begin() + 1, b->kids.end()});
        return make_counting(op, bound, v, b->kids[0], rest);
      }
      // No conjunctive body: the whole body stands in guard position; validation rejects it
      // unless it is a guard atom.
      return make_counting(op, bound, v, b, make_true());
    }
    if (h == "=") {
      Var a = read_var();
      Var b = read_var();
      expect_rparen();
      Formula f;
      f.op = Op::Eq;
      f.args = {a, b};
      return std::make_shared<const Formula>(std::move(f));
    }
    if (kKeywords.count(h)) throw ParseError("misplaced keyword '" + h + "'", head.line, head.col);
    std::vector<Var> args;
    while (tok_.kind != Token::RParen) {
      if (tok_.kind == Token::End) fail("unexpected end of input");
      args.push_back(read_var());
    }
    take();
    int ar = sig_->arity(h);
    if (ar < 0) {
      if (!infer_) throw ParseError("unknown predicate '" + h + "'", head.line, head.col);
      if (args.size() > 2)
        throw ParseError("predicate '" + h + "' has arity above 2", head.line, head.col);
      (args.empty() ? sig_->nullary : args.size() == 1 ? sig_->unary : sig_->binary).push_back(h);
    } else if (static_cast<std::size_t>(ar) != args.size()) {
      throw ParseError("arity mismatch for '" + h + "': expected " + std::to_string(ar) + ", got " +
                           std::to_string(args.size()),
                       head.line, head.col);
    }
    return make_atom(h, std::move(args));
  }

  Lexer lex_;
  Token tok_;
  Signature* sig_;
  bool infer_;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) {
    if (w[0] == ';') break;
    out.push_back(w);
  }
  return out;
}

}  // namespace

ParsedFormula parse_formula(std::string_view text) {
  ParsedFormula out;
  auto lines = split_lines(text);
  std::size_t i = 0;
  bool headers = false;
  std::size_t offset = 0;
  for (; i < lines.size(); ++i) {
    auto ws = words(lines[i]);
    if (ws.empty()) {
      offset += lines[i].size() + 1;
      continue;
    }
    if (ws[0] != "nullary" && ws[0] != "unary" && ws[0] != "binary") break;
    headers = true;
    auto& list = ws[0] == "nullary" ? out.sig.nullary : ws[0] == "unary" ? out.sig.unary : out.sig.binary;
    for (std::size_t j = 1; j < ws.size(); ++j) {
      if (kKeywords.count(ws[j]) || out.sig.has(ws[j]))
        throw ParseError("bad or duplicate predicate name '" + ws[j] + "'", i + 1, 1);
      list.push_back(ws[j]);
    }
    offset += lines[i].size() + 1;
  }
  std::string_view rest = offset <= text.size() ? text.substr(offset) : std::string_view{};
  Reader r(rest, i, &out.sig, !headers);
  out.formula = r.read_all();
  return out;
}

FormulaPtr parse_sexpr(std::string_view text, const Signature& sig, std::size_t offset_line) {
  Signature copy = sig;
  Reader r(text, offset_line, &copy, false);
  return r.read_all();
}

FormulaPtr parse_sexpr_infer(std::string_view text, Signature& sig, std::size_t offset_line) {
  Reader r(text, offset_line, &sig, true);
  return r.read_all();
}

// ---------------------------------------------------------------------------
// Writer

namespace {

void render_to(const Formula& f, std::string& out) {
  switch (f.op) {
    case Op::True:
      out += "true";
      return;
    case Op::False:
      out += "false";
      return;
    case Op::Atom:
      out += '(';
      out += f.pred;
      for (Var v : f.args) {
        out += ' ';
        out += var_name(v);
      }
      out += ')';
      return;
    case Op::Eq:
      out += "(= ";
      out += var_name(f.args[0]);
      out += ' ';
      out += var_name(f.args[1]);
      out += ')';
      return;
    default:
      break;
  }
  static const char* names[] = {"true", "false", "", "=", "not", "and", "or", "imp", "iff",
                                "forall", "exists", "atleast", "atmost", "exactly"};
  out += '(';
  out += names[static_cast<int>(f.op)];
  if (f.is_counting()) {
    out += ' ';
    out += f.bound.get_str();
    out += ' ';
    out += var_name(f.var);
    out += " (and ";
    render_to(*f.guard, out);
    out += ' ';
    render_to(*f.kids[0], out);
    out += "))";
    return;
  }
  if (f.is_quantifier()) {
    out += ' ';
    out += var_name(f.var);
  }
  for (const auto& k : f.kids) {
    out += ' ';
    render_to(*k, out);
  }
  out += ')';
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_to(f, out);
  return out;
}

std::string render_signature(const Signature& sig) {
  std::string out;
  auto line = [&](const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out += kw;
    for (const auto& n : names) out += " " + n;
    out += '\n';
  };
  line("nullary", sig.nullary);
  line("unary", sig.unary);
  line("binary", sig.binary);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

bool is_guard_atom(const Formula& f, const Signature& sig) {
  if (f.op == Op::Eq) return f.args[0] != f.args[1];
  return f.op == Op::Atom && f.args.size() == 2 && f.args[0] != f.args[1] &&
         sig.arity(f.pred) == 2;
}

namespace {

class Validator {
 public:
  Validator(const Signature& sig, Validated* out) : sig_(sig), out_(out) {}

  VarMask visit(const FormulaPtr& fp) {
    const Formula& f = *fp;
    VarMask m = 0;
    switch (f.op) {
      case Op::True:
      case Op::False:
        break;
      case Op::Atom: {
        int ar = sig_.arity(f.pred);
        if (ar < 0) throw GuardViolation("unknown predicate in " + render(f));
        if (static_cast<std::size_t>(ar) != f.args.size())
          throw GuardViolation("arity mismatch in " + render(f));
        for (Var v : f.args) m |= mask_of(v);
        break;
      }
      case Op::Eq:
        m = mask_of(f.args[0]) | mask_of(f.args[1]);
        break;
      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Imp:
      case Op::Iff:
        for (const auto& k : f.kids) m |= visit(k);
        break;
      case Op::Forall:
      case Op::Exists: {
        VarMask b = visit(f.kids[0]);
        if (b == 3 && !guarded_plain(f)) throw GuardViolation("unguarded quantifier in " + render(f));
        m = b & static_cast<VarMask>(~mask_of(f.var));
        break;
      }
      case Op::AtLeast:
      case Op::AtMost:
      case Op::Exactly: {
        if (!is_guard_atom(*f.guard, sig_))
          throw GuardViolation("counting quantifier without guard atom in " + render(f));
        VarMask b = visit(f.guard) | visit(f.kids[0]);
        m = b & static_cast<VarMask>(~mask_of(f.var));
        break;
      }
    }
    out_->free[fp.get()] = m;
    return m;
  }

 private:
  bool guarded_plain(const Formula& f) const {
    GuardedBody gb = split_guarded(f);
    return gb.guard && is_guard_atom(*gb.guard, sig_);
  }

  const Signature& sig_;
  Validated* out_;
};

}  // namespace

Validated validate_gc2(const FormulaPtr& f, const Signature& sig) {
  Validated v;
  v.formula = f;
  Validator(sig, &v).visit(f);
  return v;
}

mpz_class formula_size(const Formula& f) {
  mpz_class n = 1;
  for (const auto& k : f.kids) n += formula_size(*k);
  if (f.is_counting()) {
    n += formula_size(*f.guard);
    n += static_cast<unsigned long>(mpz_sizeinbase(f.bound.get_mpz_t(), 2));
  }
  return n;
}

}  // namespace gc2
