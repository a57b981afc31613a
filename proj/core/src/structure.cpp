#include "gc2/structure.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gc2 {

Structure::Structure(const Signature& sig, Element n) : n_(n) {
  sig_.nullary = sig.nullary;
  sig_.unary = sig.unary;
  sig_.binary = sig.binary;
  nullary_.assign(sig.nullary.size(), false);
  unary_.assign(sig.unary.size(), std::vector<bool>(n, false));
  out_.assign(sig.binary.size(), std::vector<std::vector<Element>>(n));
  in_ = out_;
}

bool Structure::edge(std::size_t r, Element a, Element b) const {
  const auto& o = out_[r][a];
  return std::binary_search(o.begin(), o.end(), b);
}

void Structure::add_edge(std::size_t r, Element a, Element b) {
  if (a >= n_ || b >= n_) throw InvalidInput("edge endpoint outside the domain");
  auto& o = out_[r][a];
  auto it = std::lower_bound(o.begin(), o.end(), b);
  if (it != o.end() && *it == b) return;
  o.insert(it, b);
  auto& i = in_[r][b];
  i.insert(std::lower_bound(i.begin(), i.end(), a), a);
}

std::uint64_t Structure::edge_count(std::size_t r) const {
  std::uint64_t c = 0;
  for (const auto& o : out_[r]) c += o.size();
  return c;
}

std::vector<Element> Structure::partners(Element a) const {
  std::vector<Element> p;
  for (std::size_t r = 0; r < out_.size(); ++r) {
    p.insert(p.end(), out_[r][a].begin(), out_[r][a].end());
    p.insert(p.end(), in_[r][a].begin(), in_[r][a].end());
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  p.erase(std::remove(p.begin(), p.end(), a), p.end());
  return p;
}

bool Structure::operator==(const Structure& o) const {
  return n_ == o.n_ && sig_.nullary == o.sig_.nullary && sig_.unary == o.sig_.unary &&
         sig_.binary == o.sig_.binary && nullary_ == o.nullary_ && unary_ == o.unary_ && out_ == o.out_;
}

Structure parse_structure(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::optional<Element> n;
  struct Decl {
    int arity;
    std::string name;
    std::string rest;
    std::size_t line;
  };
  std::vector<Decl> decls;
  Signature sig;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == ';') continue;
    if (kw == "domain") {
      long long v;
      if (n || !(ls >> v) || v < 1) throw ParseError("bad domain line", lineno, 1);
      n = static_cast<Element>(v);
      continue;
    }
    int ar = kw == "nullary" ? 0 : kw == "unary" ? 1 : kw == "binary" ? 2 : -1;
    if (ar < 0) throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
    std::string name;
    if (!(ls >> name) || name.back() != ':') throw ParseError("expected 'name:'", lineno, 1);
    name.pop_back();
    if (sig.has(name)) throw ParseError("predicate '" + name + "' repeated", lineno, 1);
    (ar == 0 ? sig.nullary : ar == 1 ? sig.unary : sig.binary).push_back(name);
    std::string rest;
    std::getline(ls, rest);
    decls.push_back({ar, name, rest, lineno});
  }
  if (!n) throw ParseError("missing domain line", lineno, 1);
  Structure st(sig, *n);
  for (const auto& d : decls) {
    std::istringstream rs(d.rest);
    std::string tok;
    auto num = [&](const std::string& s) -> Element {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("bad element '" + s + "'", d.line, 1);
      unsigned long long v = std::stoull(s);
      if (v >= *n) throw ParseError("element " + s + " outside the domain", d.line, 1);
      return static_cast<Element>(v);
    };
    if (d.arity == 0) {
      rs >> tok;
      if (tok != "true" && tok != "false") throw ParseError("nullary value must be true or false", d.line, 1);
      auto k = std::find(sig.nullary.begin(), sig.nullary.end(), d.name) - sig.nullary.begin();
      st.set_nullary(static_cast<std::size_t>(k), tok == "true");
    } else if (d.arity == 1) {
      std::size_t u = static_cast<std::size_t>(sig.unary_index(d.name));
      while (rs >> tok) st.set_unary(u, num(tok));
    } else {
      std::size_t r = static_cast<std::size_t>(sig.binary_index(d.name));
      while (rs >> tok) {
        if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')') throw ParseError("bad pair '" + tok + "'", d.line, 1);
        auto comma = tok.find(',');
        if (comma == std::string::npos) throw ParseError("bad pair '" + tok + "'", d.line, 1);
        st.add_edge(r, num(tok.substr(1, comma - 1)), num(tok.substr(comma + 1, tok.size() - comma - 2)));
      }
    }
  }
  return st;
}

std::string dump_structure(const Structure& st) {
  std::string out = "domain " + std::to_string(st.size()) + "\n";
  const Signature& sig = st.sig();
  for (std::size_t k = 0; k < sig.nullary.size(); ++k)
    out += "nullary " + sig.nullary[k] + ": " + (st.nullary(k) ? "true" : "false") + "\n";
  for (std::size_t u = 0; u < sig.unary.size(); ++u) {
    out += "unary " + sig.unary[u] + ":";
    for (Element a = 0; a < st.size(); ++a)
      if (st.unary(u, a)) out += " " + std::to_string(a);
    out += "\n";
  }
  for (std::size_t r = 0; r < sig.binary.size(); ++r) {
    out += "binary " + sig.binary[r] + ":";
    for (Element a = 0; a < st.size(); ++a)
      for (Element b : st.out(r, a)) out += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

TypeView::TypeView(const TypeSpace& ts, const Structure& st) : ts_(ts), st_(st) {
  const Signature& ps = ts.problem().sig;
  const Signature& ss = st.sig();
  for (const auto& b : ps.binary) bin_.push_back(ss.binary_index(b));
  std::vector<int> un;
  for (const auto& u : ps.unary) un.push_back(ss.unary_index(u));
  one_.assign(st.size(), 0);
  const unsigned nu = static_cast<unsigned>(ps.unary.size());
  for (Element a = 0; a < st.size(); ++a) {
    OneType t = 0;
    for (unsigned j = 0; j < nu; ++j)
      if (un[j] >= 0 && st.unary(static_cast<std::size_t>(un[j]), a)) t |= 1u << ts.bit_of(j);
    for (unsigned r = 0; r < bin_.size(); ++r)
      if (bin_[r] >= 0 && st.edge(static_cast<std::size_t>(bin_[r]), a, a)) t |= 1u << ts.bit_of(nu + r);
    one_[a] = t;
  }
}

TwoType TypeView::two(Element a, Element b) const {
  TwoType t{one_[a], one_[b], {}};
  for (unsigned r = 0; r < bin_.size(); ++r) {
    if (bin_[r] < 0) continue;
    std::size_t sr = static_cast<std::size_t>(bin_[r]);
    if (st_.edge(sr, a, b)) t.cross.fwd |= 1u << r;
    if (st_.edge(sr, b, a)) t.cross.rev |= 1u << r;
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Structure& st) : st_(st) {}

  bool eval(const Formula& f, Element env[2]) {
    switch (f.op) {
      case Op::True:
        return true;
      case Op::False:
        return false;
      case Op::Atom: {
        const Signature& sig = st_.sig();
        int ar = sig.arity(f.pred);
        if (ar == 0) return st_.nullary(index_of(sig.nullary, f.pred));
        if (ar == 1) return st_.unary(static_cast<std::size_t>(sig.unary_index(f.pred)), at(env, f.args[0]));
        if (ar == 2)
          return st_.edge(static_cast<std::size_t>(sig.binary_index(f.pred)), at(env, f.args[0]), at(env, f.args[1]));
        throw InvalidInput("predicate '" + f.pred + "' not interpreted by the structure");
      }
      case Op::Eq:
        return at(env, f.args[0]) == at(env, f.args[1]);
      case Op::Not:
        return !eval(*f.kids[0], env);
      case Op::And:
        for (const auto& k : f.kids)
          if (!eval(*k, env)) return false;
        return true;
      case Op::Or:
        for (const auto& k : f.kids)
          if (eval(*k, env)) return true;
        return false;
      case Op::Imp:
        return !eval(*f.kids[0], env) || eval(*f.kids[1], env);
      case Op::Iff:
        return eval(*f.kids[0], env) == eval(*f.kids[1], env);
      case Op::Forall:
      case Op::Exists: {
        const Formula& b = *f.kids[0];
        const FormulaPtr gp = split_guarded(f).guard;
        const Formula* guard = gp.get();
        bool want = f.op == Op::Exists;
        bool hit = false;
        range(f.var, guard, env, [&](Element e) {
          Element saved = env[idx(f.var)];
          env[idx(f.var)] = e;
          bool v = eval(b, env);
          env[idx(f.var)] = saved;
          if (v == want) {
            hit = true;
            return false;
          }
          return true;
        });
        return want ? hit : !hit;
      }
      case Op::AtLeast:
      case Op::AtMost:
      case Op::Exactly: {
        mpz_class count = 0;
        const mpz_class stop = f.bound + 1;
        range(f.var, f.guard.get(), env, [&](Element e) {
          Element saved = env[idx(f.var)];
          env[idx(f.var)] = e;
          bool v = (!f.guard || eval(*f.guard, env)) && eval(*f.kids[0], env);
          env[idx(f.var)] = saved;
          if (v) ++count;
          return count < stop;
        });
        if (f.op == Op::AtLeast) return count >= f.bound;
        if (f.op == Op::AtMost) return count <= f.bound;
        return count == f.bound;
      }
    }
    return false;
  }

 private:
  static std::size_t idx(Var v) { return v == Var::x ? 0 : 1; }
  static Element at(Element env[2], Var v) { return env[idx(v)]; }
  static std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
  }

  // Candidates for v: the guard's adjacency when the guard is a binary atom over v and
  // the other variable, the whole domain otherwise. Stops when fn returns false.
  template <class Fn>
  void range(Var v, const Formula* guard, Element env[2], Fn fn) {
    if (guard && guard->op == Op::Atom && guard->args.size() == 2 && guard->args[0] != guard->args[1]) {
      int r = st_.sig().binary_index(guard->pred);
      if (r >= 0) {
        Element o = at(env, other(v));
        const auto& list = guard->args[1] == v ? st_.out(static_cast<std::size_t>(r), o)
                                               : st_.in(static_cast<std::size_t>(r), o);
        std::vector<Element> copy = list;
        for (Element e : copy)
          if (!fn(e)) return;
        return;
      }
    }
    if (guard && guard->op == Op::Eq && guard->args[0] != guard->args[1]) {
      fn(at(env, other(v)));
      return;
    }
    for (Element e = 0; e < st_.size(); ++e)
      if (!fn(e)) return;
  }

  const Structure& st_;
};

}  // namespace

bool evaluate(const Formula& f, const Structure& st, Element x, Element y) {
  if (st.size() == 0) throw InvalidInput("empty structure");
  Element env[2] = {x, y};
  return Evaluator(st).eval(f, env);
}

// ---------------------------------------------------------------------------

std::string NormalFormReport::describe() const {
  if (ok()) return "ok";
  std::string s;
  if (alpha_fails) s += "alpha fails at element " + std::to_string(*alpha_fails) + "; ";
  if (forbidden_pair)
    s += "forbidden 2-type at (" + std::to_string(forbidden_pair->first) + "," +
         std::to_string(forbidden_pair->second) + "); ";
  if (count_wrong)
    s += "element " + std::to_string(count_wrong->element) + " has " + std::to_string(count_wrong->found) +
         " successors for counting conjunct " + std::to_string(count_wrong->index) + "; ";
  s.resize(s.size() - 2);
  return s;
}

NormalFormReport check_normal_form(const TypeSpace& ts, const Structure& st) {
  NormalFormReport rep;
  TypeView tv(ts, st);
  const Element n = st.size();
  for (Element a = 0; a < n && !rep.alpha_fails; ++a)
    if (!ts.alpha_holds(tv.one(a))) rep.alpha_fails = a;

  // Pairs with a cross atom are checked one by one; the rest share the fill 2-type of
  // their 1-type pair.
  std::map<std::pair<OneType, OneType>, std::uint64_t> linked;
  std::map<OneType, std::vector<Element>> blocks;
  for (Element a = 0; a < n; ++a) blocks[tv.one(a)].push_back(a);
  for (Element a = 0; a < n; ++a) {
    for (Element b : st.partners(a)) {
      TwoType t = tv.two(a, b);
      if (t.cross.fwd == 0 && t.cross.rev == 0) continue;
      ++linked[{t.pi1, t.pi2}];
      if (!rep.forbidden_pair && ts.is_forbidden(t)) rep.forbidden_pair = std::make_pair(a, b);
    }
  }
  for (const auto& [pi, A] : blocks) {
    for (const auto& [rho, B] : blocks) {
      if (rep.forbidden_pair) break;
      std::uint64_t pairs = static_cast<std::uint64_t>(A.size()) * B.size() - (pi == rho ? A.size() : 0);
      auto it = linked.find({pi, rho});
      if (pairs == (it == linked.end() ? 0 : it->second)) continue;
      if (!ts.is_forbidden(TypeSpace::silent_fill(pi, rho))) continue;
      for (Element a : A) {
        auto ps = st.partners(a);
        for (Element b : B)
          if (b != a && !std::binary_search(ps.begin(), ps.end(), b)) {
            rep.forbidden_pair = std::make_pair(a, b);
            break;
          }
        if (rep.forbidden_pair) break;
      }
    }
  }
  const auto& psig = ts.problem().sig;
  for (std::size_t i = 0; i < psig.counting.size() && !rep.count_wrong; ++i) {
    int r = st.sig().binary_index(psig.counting[i].pred);
    for (Element a = 0; a < n; ++a) {
      std::uint64_t c = 0;
      if (r >= 0) {
        const auto& o = st.out(static_cast<std::size_t>(r), a);
        c = o.size() - (std::binary_search(o.begin(), o.end(), a) ? 1 : 0);
      }
      if (psig.counting[i].bound != static_cast<unsigned long>(c)) {
        rep.count_wrong = NormalFormReport::Count{a, i, c};
        break;
      }
    }
  }
  return rep;
}

namespace {

// E¹ neighbours: b ≠ a with tp[a,b] an invertible message-type.
std::vector<std::vector<Element>> invertible_links(const TypeSpace& ts, const TypeView& tv, const Structure& st) {
  std::vector<std::vector<Element>> e1(st.size());
  for (Element a = 0; a < st.size(); ++a)
    for (Element b : st.partners(a))
      if (ts.classify(tv.two(a, b)) == TypeClass::Invertible) e1[a].push_back(b);
  return e1;
}

}  // namespace

bool is_chromatic(const TypeSpace& ts, const Structure& st) {
  TypeView tv(ts, st);
  auto e1 = invertible_links(ts, tv, st);
  for (Element a = 0; a < st.size(); ++a)
    for (Element b : e1[a]) {
      if (tv.one(a) == tv.one(b)) return false;
      for (Element c : e1[b])
        if (c != a && tv.one(a) == tv.one(c)) return false;
    }
  return true;
}

Structure duplicate(const Structure& st, Element copies) {
  if (copies < 1) throw InvalidInput("duplication factor must be positive");
  const Element n = st.size();
  Structure out(st.sig(), n * copies);
  const Signature& sig = st.sig();
  for (std::size_t k = 0; k < sig.nullary.size(); ++k) out.set_nullary(k, st.nullary(k));
  for (Element c = 0; c < copies; ++c) {
    for (std::size_t u = 0; u < sig.unary.size(); ++u)
      for (Element a = 0; a < n; ++a)
        if (st.unary(u, a)) out.set_unary(u, c * n + a);
    for (std::size_t r = 0; r < sig.binary.size(); ++r)
      for (Element a = 0; a < n; ++a)
        for (Element b : st.out(r, a)) out.add_edge(r, c * n + a, c * n + b);
  }
  return out;
}

Structure make_chromatic(const TypeSpace& ts, const Structure& st) {
  const Signature& ps = ts.problem().sig;
  const Element n = st.size();
  Structure out(ps, n);
  const std::size_t npad = ts.problem().padding, nu = ps.unary.size();
  for (std::size_t u = 0; u + npad < nu; ++u) {
    int su = st.sig().unary_index(ps.unary[u]);
    if (su < 0) continue;
    for (Element a = 0; a < n; ++a)
      if (st.unary(static_cast<std::size_t>(su), a)) out.set_unary(u, a);
  }
  for (std::size_t r = 0; r < ps.binary.size(); ++r) {
    int sr = st.sig().binary_index(ps.binary[r]);
    if (sr < 0) continue;
    for (Element a = 0; a < n; ++a)
      for (Element b : st.out(static_cast<std::size_t>(sr), a)) out.add_edge(r, a, b);
  }
  TypeView tv(ts, out);
  auto e1 = invertible_links(ts, tv, out);
  const mpz_class mc = ts.problem().max_bound() * ts.m();
  const mpz_class limit = mc * mc;
  std::vector<std::uint64_t> color(n, 0);
  std::vector<Element> nb;
  for (Element a = 0; a < n; ++a) {
    nb = e1[a];
    for (Element b : e1[a])
      for (Element c : e1[b])
        if (c != a) nb.push_back(c);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    if (limit < static_cast<unsigned long>(nb.size()))
      throw InternalError("chain graph degree exceeds (mC)^2 at element " + std::to_string(a));
    std::vector<bool> used(nb.size() + 1, false);
    for (Element b : nb)
      if (b < a && color[b] < used.size()) used[color[b]] = true;
    std::uint64_t c = 0;
    while (used[c]) ++c;
    color[a] = c;
    if (npad < 64 && c >> npad) throw InternalError("not enough padding predicates for the coloring");
    for (std::size_t j = 0; j < npad; ++j)
      if ((c >> j) & 1u) out.set_unary(nu - npad + j, a);
  }
  return out;
}

// ---------------------------------------------------------------------------

ElementSpectra spectra(const TypeSpace& ts, const TypeView& tv, const Structure& st, Element a) {
  const VectorRange& R = ts.range();
  const std::size_t m = ts.m();
  // node -> accumulated vector
  std::map<std::uint64_t, CountVector> sp, tl;
  auto push = [&](std::map<std::uint64_t, CountVector>& acc, unsigned depth, std::uint64_t leaf,
                  const CountVector& c) {
    for (unsigned len = 0; len <= depth; ++len) {
      BitString s{len, leaf >> (depth - len)};
      auto& v = acc[s.node()];
      if (v.empty()) v.assign(m, 0);
      for (std::size_t i = 0; i < m; ++i) v[i] += c[i];
    }
  };
  for (Element b : st.partners(a)) {
    TwoType t = tv.two(a, b);
    CountVector c = ts.c_vector(t);
    if (std::all_of(c.begin(), c.end(), [](std::uint64_t v) { return v == 0; })) continue;
    TypeClass k = ts.classify(t);
    if (k == TypeClass::Invertible) push(sp, ts.p(), t.pi2, c);
    else if (k == TypeClass::Message) push(tl, ts.q(), static_cast<std::uint64_t>(ts.m_index(t)), c);
  }
  ElementSpectra out;
  auto emit = [&](const std::map<std::uint64_t, CountVector>& acc,
                  std::vector<std::pair<std::uint64_t, std::uint64_t>>& dst) {
    for (const auto& [node, v] : acc) {
      if (!R.contains(v)) throw InvalidInput("spectrum exceeds the counting bounds; not a model");
      dst.emplace_back(node, R.encode(v));
    }
  };
  emit(sp, out.sp);
  emit(tl, out.tl);
  return out;
}

namespace {

CountVector lookup(const TypeSpace& ts, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& v,
                   std::uint64_t node) {
  for (const auto& [n, u] : v)
    if (n == node) return ts.range().decode(u);
  return CountVector(ts.m(), 0);
}

}  // namespace

CountVector spectrum(const TypeSpace& ts, const Structure& st, Element a, const BitString& s) {
  if (s.len > ts.p()) throw InvalidInput("bit string longer than p");
  TypeView tv(ts, st);
  return lookup(ts, spectra(ts, tv, st, a).sp, s.node());
}

CountVector tally(const TypeSpace& ts, const Structure& st, Element a, const BitString& t) {
  if (t.len > ts.q()) throw InvalidInput("bit string longer than q");
  TypeView tv(ts, st);
  return lookup(ts, spectra(ts, tv, st, a).tl, t.node());
}

std::vector<mpz_class> count_solution(const TypeSpace& ts, const VarSpace& vs, const Structure& st) {
  TypeView tv(ts, st);
  const Element n = st.size();
  std::vector<std::uint64_t> th(vs.size(), 0);
  std::map<OneType, std::uint64_t> block;
  for (Element a = 0; a < n; ++a) ++block[tv.one(a)];
  const std::uint64_t ynodes = vs.y_nodes(), znodes = vs.z_nodes();
  const std::uint64_t yint = (ynodes - 1) / 2, zint = (znodes - 1) / 2;
  for (const auto& [pi, c] : block) {
    for (std::uint64_t s = 0; s < ynodes; ++s) th[vs.y(pi, s, 0)] += c;
    for (std::uint64_t t = 0; t < znodes; ++t) th[vs.z(pi, t, 0)] += c;
    for (std::uint64_t s = 0; s < yint; ++s) th[vs.yh(pi, s, 0, 0)] += c;
    for (std::uint64_t t = 0; t < zint; ++t) th[vs.zh(pi, t, 0, 0)] += c;
  }
  auto find = [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& v, std::uint64_t node) {
    for (const auto& [nd, u] : v)
      if (nd == node) return u;
    return std::uint64_t{0};
  };
  for (Element a = 0; a < n; ++a) {
    OneType pi = tv.one(a);
    ElementSpectra es = spectra(ts, tv, st, a);
    for (const auto& [node, u] : es.sp) {
      ++th[vs.y(pi, node, u)];
      --th[vs.y(pi, node, 0)];
      if (node < yint) {
        ++th[vs.yh(pi, node, find(es.sp, 2 * node + 1), find(es.sp, 2 * node + 2))];
        --th[vs.yh(pi, node, 0, 0)];
      }
    }
    for (const auto& [node, u] : es.tl) {
      ++th[vs.z(pi, node, u)];
      --th[vs.z(pi, node, 0)];
      if (node < zint) {
        ++th[vs.zh(pi, node, find(es.tl, 2 * node + 1), find(es.tl, 2 * node + 2))];
        --th[vs.zh(pi, node, 0, 0)];
      }
    }
    std::vector<VarIndex> lam;
    for (Element b : st.partners(a)) {
      TwoType t = tv.two(a, b);
      if (ts.classify(t) != TypeClass::Invertible) continue;
      lam.push_back(vs.x(pi, static_cast<std::uint64_t>(ts.lambda_index(t))));
    }
    std::sort(lam.begin(), lam.end());
    lam.erase(std::unique(lam.begin(), lam.end()), lam.end());
    for (VarIndex v : lam) ++th[v];
  }
  std::vector<mpz_class> out(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) out[i] = static_cast<unsigned long>(th[i]);
  return out;
}

std::vector<mpz_class> solution_from_model(const TypeSpace& ts, const VarSpace& vs, const Structure& model) {
  Structure chrom = make_chromatic(ts, model);
  return count_solution(ts, vs, duplicate(chrom, static_cast<Element>(ts.D())));
}

}  // namespace gc2
