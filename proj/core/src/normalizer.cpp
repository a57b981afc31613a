#include "gc2/normalizer.hpp"

#include <map>

namespace gc2 {

namespace {

FormulaPtr rebuild(const FormulaPtr& f, std::vector<FormulaPtr> kids) {
  Formula g = *f;
  g.kids = std::move(kids);
  return std::make_shared<const Formula>(std::move(g));
}

FormulaPtr map_kids(const FormulaPtr& f, auto&& fn) {
  std::vector<FormulaPtr> kids;
  kids.reserve(f->kids.size());
  for (const auto& k : f->kids) kids.push_back(fn(k));
  return rebuild(f, std::move(kids));
}

FormulaPtr assign_nullary(const FormulaPtr& f, const std::map<std::string, bool>& val) {
  if (f->op == Op::Atom && f->args.empty()) {
    auto it = val.find(f->pred);
    if (it == val.end()) throw InternalError("unassigned nullary predicate " + f->pred);
    return make_bool(it->second);
  }
  if (f->kids.empty()) return f;
  return map_kids(f, [&](const FormulaPtr& k) { return assign_nullary(k, val); });
}

// Quantifier-free only. Off the diagonal x≈y is false; on it every equality is true.
FormulaPtr strip_eq(const FormulaPtr& f, bool diagonal) {
  if (f->op == Op::Eq) return make_bool(diagonal || f->args[0] == f->args[1]);
  if (f->kids.empty()) return f;
  return simplify(map_kids(f, [&](const FormulaPtr& k) { return strip_eq(k, diagonal); }));
}

bool closed_quantifier(const FormulaPtr& f) { return f->is_quantifier() && free_vars(*f) == 0; }

class Extractor {
 public:
  explicit Extractor(Signature& sig) : sig_(sig) {}

  FormulaPtr top(const FormulaPtr& f) {
    if (f->op == Op::And) return map_kids(f, [&](const FormulaPtr& k) { return top(k); });
    if (f->op == Op::Not && closed_quantifier(f->kids[0])) return rebuild(f, {keep(f->kids[0])});
    if (closed_quantifier(f)) return keep(f);
    return inner(f);
  }

  std::vector<std::pair<std::string, FormulaPtr>> defs;

 private:
  FormulaPtr keep(const FormulaPtr& f) {
    return map_kids(f, [&](const FormulaPtr& k) { return inner(k); });
  }

  FormulaPtr inner(const FormulaPtr& f) {
    if (f->kids.empty()) return f;
    FormulaPtr g = keep(f);
    if (!closed_quantifier(g)) return g;
    std::string name = fresh_name(sig_, "s");
    sig_.nullary.push_back(name);
    defs.emplace_back(name, g);
    return make_atom(name, {});
  }

  Signature& sig_;
};

class Scott {
 public:
  Scott(const Signature& sig) {
    p_.sig = sig;
    p_.sig.nullary.clear();
    p_.sig.counting.clear();
  }

  NormalFormProblem run(const FormulaPtr& f) {
    top(f, false);
    p_.alpha = simplify(make_and(alpha_));
    complete_guards_and_counts(p_);
    p_.check();
    return std::move(p_);
  }

 private:
  [[noreturn]] static void not_conjunctive(const FormulaPtr& f) {
    throw InvalidInput("closed subformula outside a top-level conjunct: " + render(f));
  }

  void top(const FormulaPtr& f, bool neg) {
    switch (f->op) {
      case Op::True:
      case Op::False:
        if ((f->op == Op::False) != neg) alpha_.push_back(make_false());
        return;
      case Op::Not:
        return top(f->kids[0], !neg);
      case Op::And:
        if (neg && f->kids.size() > 1) not_conjunctive(f);
        for (const auto& k : f->kids) top(k, neg);
        return;
      case Op::Or:
        if (!neg && f->kids.size() > 1) not_conjunctive(f);
        for (const auto& k : f->kids) top(k, neg);
        return;
      case Op::Imp:
        if (!neg) not_conjunctive(f);
        top(f->kids[0], false);
        top(f->kids[1], true);
        return;
      case Op::Forall:
      case Op::Exists: {
        FormulaPtr body = f->body();
        if (f->var == Var::y) body = swap_vars(body);
        if (neg) body = make_not(body);
        if ((f->op == Op::Forall) != neg) forall_x(body);
        else exists_x(body);
        return;
      }
      default:
        not_conjunctive(f);
    }
  }

  // ∀x φ with φ free in x at most.
  void forall_x(const FormulaPtr& f) {
    if (f->op == Op::And) {
      for (const auto& k : f->kids) forall_x(k);
      return;
    }
    if (f->is_quantifier() && f->var == Var::y && free_vars(*f) == mask_of(Var::x) && direct(f)) return;
    alpha_.push_back(strip_eq(name(f), true));
  }

  // Counting or guarded quantifier over y directly under ∀x; false if it needs naming.
  bool direct(const FormulaPtr& f) {
    const FormulaPtr& body = f->body();
    if (f->op == Op::Forall || f->op == Op::Exists) {
      if (!(free_vars(*body) & mask_of(Var::y))) {
        forall_x(body);
        return true;
      }
      auto [g, rest] = split_guarded(*f);
      if (g->op == Op::Eq) return false;
      if (f->op == Op::Forall) at_most(make_true(), 0, g, make_not(name(rest)));
      else at_least(make_true(), 1, g, name(rest));
      return true;
    }
    if (f->guard->op == Op::Eq) return false;
    FormulaPtr chi = name(body);
    if (f->op == Op::AtLeast) at_least(make_true(), f->bound, f->guard, chi);
    else if (f->op == Op::AtMost) at_most(make_true(), f->bound, f->guard, chi);
    else exactly(make_true(), f->bound, f->guard, chi);
    return true;
  }

  // ∃x φ: a fresh f with ∃=1 partner, every f-edge touching a φ-element.
  void exists_x(const FormulaPtr& f) {
    FormulaPtr chi = strip_eq(name(f), true);
    std::string fp = fresh_binary();
    p_.sig.counting.push_back({fp, 1});
    add_guard(fp, simplify(make_or({chi, swap_vars(chi)})));
  }

  // Quantifier-free equivalent over fresh unary predicates.
  FormulaPtr name(const FormulaPtr& f) {
    if (!f->is_quantifier()) {
      if (f->kids.empty()) return f;
      return map_kids(f, [&](const FormulaPtr& k) { return name(k); });
    }
    VarMask fv = free_vars(*f);
    if (fv == 0) not_conjunctive(f);
    if (fv == mask_of(Var::y)) return swap_vars(name(swap_vars(f)));
    const FormulaPtr& body = f->body();
    if (f->op == Op::Forall || f->op == Op::Exists) {
      if (!(free_vars(*body) & mask_of(Var::y))) return name(body);
      auto [g, rest] = split_guarded(*f);
      if (g->op == Op::Eq) return name(substitute(rest, Var::y, Var::x));
      if (f->op == Op::Forall) return make_not(at_least_def(1, g, make_not(name(rest))));
      return at_least_def(1, g, name(rest));
    }
    const mpz_class& k = f->bound;
    if (f->guard->op == Op::Eq) {
      FormulaPtr d = name(substitute(body, Var::y, Var::x));
      switch (f->op) {
        case Op::AtLeast:
          return k == 1 ? d : make_bool(k <= 0);
        case Op::AtMost:
          return k == 0 ? make_not(d) : make_true();
        default:
          return k == 0 ? make_not(d) : k == 1 ? d : make_false();
      }
    }
    FormulaPtr chi = name(body);
    switch (f->op) {
      case Op::AtLeast:
        return k == 0 ? make_true() : at_least_def(k, f->guard, chi);
      case Op::AtMost:
        return make_not(at_least_def(k + 1, f->guard, chi));
      default:
        if (k == 0) return make_not(at_least_def(1, f->guard, chi));
        return make_and({at_least_def(k, f->guard, chi), make_not(at_least_def(k + 1, f->guard, chi))});
    }
  }

  // p(x) ↔ ∃≥k y (γ ∧ χ).
  FormulaPtr at_least_def(const mpz_class& k, const FormulaPtr& g, const FormulaPtr& chi) {
    std::string key = k.get_str() + "|" + render(g) + "|" + render(chi);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::string pn = fresh_name(p_.sig, "p");
    p_.sig.unary.push_back(pn);
    FormulaPtr q = make_atom(pn, {Var::x});
    memo_.emplace(key, q);
    at_least(q, k, g, chi);
    at_most(make_not(q), k - 1, g, chi);
    return q;
  }

  struct Theta {
    std::string pred;
    bool reversed;    // γ = r(y,x)
    FormulaPtr off;   // θ for y ≠ x
    FormulaPtr diag;  // θ(x,x)
  };

  static Theta theta(const FormulaPtr& g, const FormulaPtr& chi) {
    FormulaPtr t = make_and({g, chi});
    return {g->pred, g->args[0] == Var::y, strip_eq(t, false), strip_eq(substitute(t, Var::y, Var::x), true)};
  }

  // when q(x): #{y : γ ∧ χ} ≥ k
  void at_least(const FormulaPtr& q, const mpz_class& k, const FormulaPtr& g, const FormulaPtr& chi) {
    if (k <= 0) return;
    Theta t = theta(g, chi);
    if (t.diag->op != Op::True) off_at_least(make_and({q, make_not(t.diag)}), k, t);
    if (t.diag->op != Op::False && k - 1 >= 1) off_at_least(make_and({q, t.diag}), k - 1, t);
  }

  // when q(x): #{y : γ ∧ χ} ≤ k
  void at_most(const FormulaPtr& q, const mpz_class& k, const FormulaPtr& g, const FormulaPtr& chi) {
    if (k < 0) {
      alpha_.push_back(strip_eq(make_not(q), true));
      return;
    }
    Theta t = theta(g, chi);
    if (t.diag->op != Op::False) {
      FormulaPtr qd = make_and({q, t.diag});
      if (k == 0) alpha_.push_back(strip_eq(make_not(qd), true));
      else off_at_most(qd, k - 1, t);
    }
    if (t.diag->op != Op::True) off_at_most(make_and({q, make_not(t.diag)}), k, t);
  }

  // when q(x): #{y : γ ∧ χ} = k
  void exactly(const FormulaPtr& q, const mpz_class& k, const FormulaPtr& g, const FormulaPtr& chi) {
    Theta t = theta(g, chi);
    if (t.diag->op == Op::False) return off_exact(q, k, t);
    if (t.diag->op == Op::True) {
      if (k == 0) alpha_.push_back(strip_eq(make_not(q), true));
      else off_exact(q, k - 1, t);
      return;
    }
    at_least(q, k, g, chi);
    at_most(q, k, g, chi);
  }

  void off_at_least(const FormulaPtr& trig, const mpz_class& k, const Theta& t) {
    std::string f = fresh_binary();
    p_.sig.counting.push_back({f, k});
    add_guard(f, simplify(make_imp(trig, t.off)));
  }

  void off_at_most(const FormulaPtr& trig, const mpz_class& k, const Theta& t) {
    if (k == 0) {
      oriented_guard(t, make_not(make_and({trig, t.off})));
      return;
    }
    std::string f = fresh_binary();
    p_.sig.counting.push_back({f, k});
    oriented_guard(t, make_imp(make_and({trig, t.off}), make_atom(f, {Var::x, Var::y})));
  }

  void off_exact(const FormulaPtr& trig, const mpz_class& k, const Theta& t) {
    if (k == 0) return off_at_most(trig, 0, t);
    bool plain = trig->op == Op::True && !t.reversed && t.off->op == Op::Atom && t.off->pred == t.pred;
    if (plain && !is_counting(t.pred)) {
      p_.sig.counting.push_back({t.pred, k});
      return;
    }
    std::string f = fresh_binary();
    p_.sig.counting.push_back({f, k});
    add_guard(f, simplify(make_imp(trig, t.off)));
    oriented_guard(t, make_imp(make_and({trig, t.off}), make_atom(f, {Var::x, Var::y})));
  }

  // ∀x∀y(γ → φ) with γ = r(y,x) reads ∀x∀y(r(x,y) → φ[x↔y]).
  void oriented_guard(const Theta& t, const FormulaPtr& phi) {
    add_guard(t.pred, simplify(t.reversed ? swap_vars(phi) : phi));
  }

  void add_guard(const std::string& pred, const FormulaPtr& beta) {
    if (beta->op == Op::True) return;
    p_.guards.push_back({pred, beta});
  }

  bool is_counting(const std::string& pred) const {
    for (const auto& c : p_.sig.counting)
      if (c.pred == pred) return true;
    return false;
  }

  std::string fresh_binary() {
    std::string f = fresh_name(p_.sig, "f");
    p_.sig.binary.push_back(f);
    return f;
  }

  NormalFormProblem p_;
  std::vector<FormulaPtr> alpha_;
  std::map<std::string, FormulaPtr> memo_;
};

}  // namespace

std::vector<NullaryBranch> eliminate_nullary(const FormulaPtr& f, const Signature& sig, const Caps& caps) {
  Signature work = sig;
  Extractor ex(work);
  FormulaPtr body = ex.top(f);
  std::vector<std::string> atoms = sig.nullary;
  for (const auto& [n, d] : ex.defs) atoms.push_back(n);
  if (atoms.size() > caps.max_nullary)
    throw CapExceeded(std::to_string(atoms.size()) + " case-split atoms exceed the cap " +
                      std::to_string(caps.max_nullary));
  Signature bsig = sig;
  bsig.nullary.clear();
  std::vector<NullaryBranch> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
    std::map<std::string, bool> val;
    for (std::size_t i = 0; i < atoms.size(); ++i) val[atoms[i]] = (mask >> i) & 1u;
    std::vector<FormulaPtr> parts{assign_nullary(body, val)};
    for (const auto& [n, d] : ex.defs) {
      FormulaPtr s = assign_nullary(d, val);
      parts.push_back(val[n] ? s : make_not(s));
    }
    NullaryBranch b;
    for (std::size_t i = 0; i < sig.nullary.size(); ++i) b.assignment.emplace_back(atoms[i], val[atoms[i]]);
    b.sig = bsig;
    b.formula = simplify(make_and(std::move(parts)));
    out.push_back(std::move(b));
  }
  return out;
}

NormalFormProblem scott_normalize(const FormulaPtr& f, const Signature& sig) {
  if (free_vars(*f)) throw InvalidInput("formula has free variables");
  return Scott(sig).run(f);
}

std::vector<NormalizedBranch> normalize(const FormulaPtr& f, const Signature& sig, const Caps& caps) {
  if (free_vars(*f)) throw InvalidInput("formula has free variables");
  validate_gc2(f, sig);
  std::vector<NormalizedBranch> out;
  for (auto& b : eliminate_nullary(f, sig, caps)) {
    NormalizedBranch nb;
    nb.assignment = std::move(b.assignment);
    NormalFormProblem p = scott_normalize(b.formula, b.sig);
    nb.trivially_false = p.alpha->op == Op::False;
    nb.problem = pad_signature(std::move(p), caps);
    out.push_back(std::move(nb));
  }
  return out;
}

}  // namespace gc2
