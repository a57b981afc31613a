#include "gc2/horn.hpp"

namespace gc2 {

void HornProgram::add(std::span<const VarIndex> body, std::int64_t head, std::size_t origin) {
  if (head >= static_cast<std::int64_t>(nprops_) || head < kFalse)
    throw InternalError("horn head out of range");
  for (VarIndex v : body)
    if (v >= nprops_) throw InternalError("horn body out of range");
  body_.insert(body_.end(), body.begin(), body.end());
  offsets_.push_back(body_.size());
  heads_.push_back(head);
  origin_.push_back(origin);
}

HornProgram to_horn(const ConstraintSet& cs) {
  HornProgram hp(cs.num_vars());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    switch (c.kind) {
      case Kind::SumEq:
        hp.add(c.terms, c.target, i);
        for (VarIndex t : c.terms) hp.add({&c.target, 1}, t, i);
        break;
      case Kind::SumGe1:
        hp.add(c.terms, HornProgram::kFalse, i);
        break;
      case Kind::Zero:
        hp.add({}, c.target, i);
        break;
      case Kind::Cond:
        hp.add(c.terms, c.target, i);
        break;
    }
  }
  return hp;
}

HornResult horn_sat(const HornProgram& hp) {
  const std::uint64_t n = hp.num_props();
  // Occurrence lists in CSR; a repeated body variable occurs repeatedly.
  std::vector<std::uint64_t> start(n + 1, 0);
  for (std::size_t c = 0; c < hp.size(); ++c)
    for (VarIndex v : hp.body(c)) ++start[v + 1];
  for (std::uint64_t v = 0; v < n; ++v) start[v + 1] += start[v];
  std::vector<std::uint32_t> occ(start[n]);
  {
    std::vector<std::uint64_t> fill(start.begin(), start.end() - 1);
    for (std::size_t c = 0; c < hp.size(); ++c)
      for (VarIndex v : hp.body(c)) occ[fill[v]++] = static_cast<std::uint32_t>(c);
  }
  HornResult r;
  r.zero.assign(n, false);
  std::vector<std::uint32_t> missing(hp.size());
  std::vector<VarIndex> queue;
  auto fire = [&](std::size_t c) -> bool {
    std::int64_t h = hp.head(c);
    if (h == HornProgram::kFalse) {
      r.refuted_by = static_cast<std::int64_t>(c);
      return false;
    }
    if (!r.zero[h]) {
      r.zero[h] = true;
      queue.push_back(static_cast<VarIndex>(h));
    }
    return true;
  };
  for (std::size_t c = 0; c < hp.size(); ++c) {
    missing[c] = static_cast<std::uint32_t>(hp.body(c).size());
    if (missing[c] == 0 && !fire(c)) return r;
  }
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    VarIndex v = queue[qi];
    for (std::uint64_t o = start[v]; o < start[v + 1]; ++o)
      if (--missing[occ[o]] == 0 && !fire(occ[o])) return r;
  }
  r.satisfiable = true;
  return r;
}

std::string dump_horn(const HornProgram& hp) {
  std::string out;
  for (std::size_t c = 0; c < hp.size(); ++c) {
    bool first = true;
    for (VarIndex v : hp.body(c)) {
      if (!first) out += ' ';
      first = false;
      out += 'X' + std::to_string(v);
    }
    out += first ? "-> " : " -> ";
    out += hp.head(c) == HornProgram::kFalse ? std::string("FALSE") : 'X' + std::to_string(hp.head(c));
    out += '\n';
  }
  return out;
}

namespace {

Star add(const Star& a, const Star& b) {
  if (a.aleph || b.aleph) return Star::inf();
  return {false, a.n + b.n};
}

bool star_eq(const Star& a, const Star& b) { return a.aleph == b.aleph && (a.aleph || a.n == b.n); }

bool star_ge(const Star& a, const mpz_class& d) { return a.aleph || a.n >= d; }

}  // namespace

std::int64_t first_violation_star(const ConstraintSet& cs, const std::vector<Star>& theta) {
  if (theta.size() != cs.num_vars()) throw InvalidInput("assignment size mismatch");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    Star s;
    for (VarIndex t : c.terms) s = add(s, theta[t]);
    bool ok = true;
    switch (c.kind) {
      case Kind::SumEq:
        ok = star_eq(theta[c.target], s);
        break;
      case Kind::SumGe1:
        ok = star_ge(s, 1);
        break;
      case Kind::Zero:
        ok = !theta[c.target].positive();
        break;
      case Kind::Cond:
        ok = !theta[c.target].positive() || star_ge(s, mpz_class(std::to_string(c.threshold)));
        break;
    }
    if (!ok) return static_cast<std::int64_t>(i);
  }
  return -1;
}

SatVerdict decide_sat(const ConstraintSet& cs) {
  HornResult r = horn_sat(to_horn(cs));
  SatVerdict v;
  v.yes = r.satisfiable;
  if (!v.yes) return v;
  StarSolution w;
  w.aleph.resize(cs.num_vars());
  std::vector<Star> theta(cs.num_vars());
  for (std::uint64_t i = 0; i < cs.num_vars(); ++i) {
    w.aleph[i] = !r.zero[i];
    if (w.aleph[i]) theta[i] = Star::inf();
    else ++v.zero_count;
  }
  std::int64_t bad = first_violation_star(cs, theta);
  if (bad >= 0) throw InternalError("Horn witness violates constraint " + std::to_string(bad));
  v.witness = std::move(w);
  return v;
}

}  // namespace gc2
