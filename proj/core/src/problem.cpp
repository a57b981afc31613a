#include "gc2/problem.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace gc2 {

mpz_class NormalFormProblem::max_bound() const {
  mpz_class c = 0;
  for (const auto& k : sig.counting) c = std::max(c, k.bound);
  return c;
}

namespace {

void check_qf(const Formula& f, bool allow_y, const Signature& sig, const char* what) {
  if (has_quantifier(f)) throw InvalidInput(std::string(what) + " contains a quantifier");
  if (has_equality(f)) throw InvalidInput(std::string(what) + " contains equality");
  VarMask fv = free_vars(f);
  if (!allow_y && (fv & mask_of(Var::y))) throw InvalidInput(std::string(what) + " mentions y");
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (g->op == Op::Atom) {
      int ar = sig.arity(g->pred);
      if (ar < 1 || static_cast<std::size_t>(ar) != g->args.size())
        throw InvalidInput(std::string(what) + " has a bad atom " + render(*g));
    }
    for (const auto& k : g->kids) stack.push_back(k.get());
  }
}

}  // namespace

void NormalFormProblem::check() const {
  sig.check();
  if (!sig.nullary.empty()) throw InvalidInput("normal form admits no nullary predicates");
  if (padding > sig.unary.size()) throw InvalidInput("padding exceeds unary predicates");
  if (!alpha) throw InvalidInput("missing alpha");
  check_qf(*alpha, false, sig, "alpha");
  if (guards.empty()) throw InvalidInput("no guard pair");
  if (sig.counting.empty()) throw InvalidInput("no counting conjunct");
  for (const auto& g : guards) {
    if (sig.binary_index(g.pred) < 0) throw InvalidInput("guard predicate '" + g.pred + "' is not binary");
    check_qf(*g.beta, true, sig, "guard formula");
  }
}

std::size_t padding_count(std::size_t m, const mpz_class& c) {
  mpz_class mc = c * static_cast<unsigned long>(m);
  mpz_class sq = mc * mc;
  if (sq == 0) return 0;
  return mpz_sizeinbase(sq.get_mpz_t(), 2);
}

std::string fresh_name(const Signature& sig, const std::string& stem) {
  for (std::size_t k = 0;; ++k) {
    std::string n = stem + std::to_string(k);
    if (!sig.has(n)) return n;
  }
}

NormalFormProblem pad_signature(NormalFormProblem p, const Caps& caps) {
  if (p.padding != 0) throw InvalidInput("problem already padded");
  std::size_t k = padding_count(p.m(), p.max_bound());
  if (p.sig.size() + k > caps.max_signature)
    throw CapExceeded("signature size " + std::to_string(p.sig.size() + k) + " exceeds cap " +
                      std::to_string(caps.max_signature));
  for (std::size_t i = 0; i < k; ++i) p.sig.unary.push_back(fresh_name(p.sig, "c"));
  p.padding = k;
  return p;
}

void complete_guards_and_counts(NormalFormProblem& p) {
  if (p.sig.counting.empty()) {
    std::string f = fresh_name(p.sig, "f");
    p.sig.binary.push_back(f);
    p.sig.counting.push_back({f, 1});
  }
  if (p.guards.empty()) p.guards.push_back({p.sig.counting[0].pred, make_true()});
}

namespace {

bool balanced(const std::string& s) {
  int depth = 0;
  bool any = false;
  for (char c : s) {
    if (c == ';') break;
    if (c == '(') {
      ++depth;
      any = true;
    } else if (c == ')') {
      --depth;
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      any = true;
    }
  }
  return any && depth <= 0;
}

}  // namespace

NormalFormProblem parse_normal_form(std::string_view text) {
  NormalFormProblem p;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool headers = false, seen_alpha = false, ended = false, body = false;
  Signature& sig = p.sig;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == ';') continue;
    if (ended) throw ParseError("content after 'end'", lineno, 1);
    if (kw == "unary" || kw == "binary") {
      if (body) throw ParseError("header after body", lineno, 1);
      headers = true;
      std::string n;
      while (ls >> n) {
        if (sig.has(n)) throw ParseError("duplicate predicate '" + n + "'", lineno, 1);
        (kw == "unary" ? sig.unary : sig.binary).push_back(n);
      }
      continue;
    }
    body = true;
    if (kw == "end") {
      ended = true;
      continue;
    }
    auto read_expr = [&](std::string rest) {
      std::size_t start = lineno;
      while (!balanced(rest)) {
        std::string more;
        if (!std::getline(in, more)) throw ParseError("unterminated expression", start, 1);
        ++lineno;
        rest += "\n" + more;
      }
      if (headers) return parse_sexpr(rest, sig, start - 1);
      return parse_sexpr_infer(rest, sig, start - 1);
    };
    std::string rest;
    std::getline(ls, rest);
    if (kw == "alpha") {
      if (seen_alpha) throw ParseError("second 'alpha' line", lineno, 1);
      seen_alpha = true;
      p.alpha = read_expr(rest);
    } else if (kw == "guard" || kw == "count") {
      std::istringstream rs(rest);
      std::string pred;
      if (!(rs >> pred)) throw ParseError("missing predicate", lineno, 1);
      int ar = sig.arity(pred);
      if (ar < 0) {
        if (headers) throw ParseError("unknown predicate '" + pred + "'", lineno, 1);
        sig.binary.push_back(pred);
      } else if (ar != 2) {
        throw ParseError("predicate '" + pred + "' is not binary", lineno, 1);
      }
      std::string tail;
      std::getline(rs, tail);
      if (kw == "guard") {
        p.guards.push_back({pred, read_expr(tail)});
      } else {
        std::istringstream ts(tail);
        std::string num, extra;
        if (!(ts >> num) || (ts >> extra)) throw ParseError("count needs one bound", lineno, 1);
        if (!std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw ParseError("bound must be a positive decimal integer", lineno, 1);
        mpz_class b(num, 10);
        if (b < 1) throw ParseError("bound must be positive", lineno, 1);
        for (const auto& c : sig.counting)
          if (c.pred == pred) throw ParseError("counting predicate '" + pred + "' repeated", lineno, 1);
        sig.counting.push_back({pred, b});
      }
    } else {
      throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
    }
  }
  if (!ended) throw ParseError("missing 'end'", lineno, 1);
  if (!p.alpha) p.alpha = make_true();
  complete_guards_and_counts(p);
  try {
    p.check();
  } catch (const InvalidInput& e) {
    throw ParseError(e.what(), lineno, 1);
  }
  return p;
}

std::string render_normal_form(const NormalFormProblem& p) {
  std::string out;
  std::size_t keep = p.sig.unary.size() - p.padding;
  if (keep) {
    out += "unary";
    for (std::size_t i = 0; i < keep; ++i) out += " " + p.sig.unary[i];
    out += '\n';
  }
  if (!p.sig.binary.empty()) {
    out += "binary";
    for (const auto& b : p.sig.binary) out += " " + b;
    out += '\n';
  }
  out += "alpha " + render(p.alpha) + "\n";
  for (const auto& g : p.guards) out += "guard " + g.pred + " " + render(g.beta) + "\n";
  for (const auto& c : p.sig.counting) out += "count " + c.pred + " " + c.bound.get_str() + "\n";
  out += "end\n";
  return out;
}

FormulaPtr problem_formula(const NormalFormProblem& p) {
  std::vector<FormulaPtr> parts{make_quant(Op::Forall, Var::x, p.alpha)};
  FormulaPtr ne = make_not(make_eq(Var::x, Var::y));
  for (const auto& g : p.guards) {
    FormulaPtr e = make_atom(g.pred, {Var::x, Var::y});
    FormulaPtr body = make_or({g.beta, make_eq(Var::x, Var::y)});
    parts.push_back(make_quant(Op::Forall, Var::x, make_quant(Op::Forall, Var::y, raw_node(Op::Imp, {e, body}))));
  }
  for (const auto& c : p.sig.counting) {
    FormulaPtr e = make_atom(c.pred, {Var::x, Var::y});
    parts.push_back(make_quant(Op::Forall, Var::x, make_counting(Op::Exactly, c.bound, Var::y, e, ne)));
  }
  return raw_node(Op::And, std::move(parts));
}

std::uint64_t problem_hash(const NormalFormProblem& p) {
  std::string s = render_normal_form(p) + "padding " + std::to_string(p.padding);
  for (std::size_t i = p.sig.unary.size() - p.padding; i < p.sig.unary.size(); ++i) s += " " + p.sig.unary[i];
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gc2
