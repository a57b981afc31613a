#include "gc2/solver_nat.hpp"

#include <algorithm>
#include <optional>

#include "gc2/horn.hpp"

namespace gc2 {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "YES";
    case Verdict::No:
      return "NO";
    case Verdict::ResourceExceeded:
      return "RESOURCE-EXCEEDED";
  }
  return "?";
}

mpz_class papadimitriou_bound(std::uint64_t rows, std::uint64_t cols, const mpz_class& a) {
  mpz_class base = mpz_class(std::to_string(rows)) * a;
  mpz_class h;
  mpz_pow_ui(h.get_mpz_t(), base.get_mpz_t(), 2 * rows + 1);
  h *= mpz_class(std::to_string(cols));
  return h < 1 ? mpz_class(1) : h;
}

namespace {

std::uint64_t max_threshold(const ConstraintSet& cs) {
  std::uint64_t d = 1;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (cs[i].kind == Kind::Cond) d = std::max(d, cs[i].threshold);
  return d;
}

}  // namespace

mpz_class papadimitriou_bound(const ConstraintSet& cs) {
  std::uint64_t cond = cs.count(Kind::Cond), ge = cs.count(Kind::SumGe1);
  std::uint64_t rows = cs.size() + cond;
  std::uint64_t cols = cs.num_vars() + cond + ge + 2 * cond;
  return papadimitriou_bound(rows, cols, mpz_class(std::to_string(max_threshold(cs))));
}

LinearSystem build_EH(const ConstraintSet& cs, const mpz_class& H) {
  LinearSystem sys(cs.num_vars());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    LinearRow r;
    switch (c.kind) {
      case Kind::SumEq:
        r.coefs.emplace_back(c.target, 1);
        for (VarIndex t : c.terms) r.coefs.emplace_back(t, -1);
        break;
      case Kind::SumGe1:
        for (VarIndex t : c.terms) r.coefs.emplace_back(t, 1);
        r.rel = Rel::Ge;
        r.rhs = 1;
        break;
      case Kind::Zero:
        r.coefs.emplace_back(c.target, 1);
        break;
      case Kind::Cond: {
        std::uint32_t g = sys.add_var();
        LinearRow a;
        a.coefs.emplace_back(g, H);
        a.coefs.emplace_back(c.target, -1);
        a.rel = Rel::Ge;
        sys.add_row(std::move(a));
        for (VarIndex t : c.terms) r.coefs.emplace_back(t, 1);
        r.coefs.emplace_back(g, -mpz_class(std::to_string(c.threshold)));
        r.rel = Rel::Ge;
        break;
      }
    }
    sys.add_row(std::move(r));
  }
  return sys;
}

MomentRelaxation build_moment_relaxation(const ConstraintSet& cs) {
  const auto& vs = cs.space();
  if (!vs) throw InvalidInput("moment relaxation needs a structured constraint set");
  const Layout& L = vs->layout();
  const std::uint32_t P = vs->P();
  const std::uint64_t ninv = vs->num_inv(), U = vs->U();
  const std::size_t m = L.counting.size();
  const std::uint64_t zleaf0 = (std::uint64_t{1} << vs->q()) - 1;
  const std::uint64_t nleaves = std::uint64_t{1} << vs->q();
  MomentRelaxation mr;
  const std::uint64_t nx = vs->family_size(Family::X);
  const std::uint64_t nz = static_cast<std::uint64_t>(P) * nleaves * (U - 1);
  mr.sys = LinearSystem(nx + nz + P);
  mr.source.reserve(nx + nz);
  for (std::uint64_t i = 0; i < nx; ++i) mr.source.push_back(vs->x(0, 0) + static_cast<VarIndex>(i));
  std::vector<CountVector> dec(U);
  for (std::uint64_t u = 0; u < U; ++u) dec[u] = vs->range().decode(u);
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < nleaves; ++j)
      for (std::uint64_t u = 1; u < U; ++u) mr.source.push_back(vs->z(pi, zleaf0 + j, u));
  auto ncol = [&](OneType pi) { return static_cast<std::uint32_t>(nx + nz + pi); };

  const auto& inv = vs->invertible_patterns();
  std::vector<CountVector> cvec(ninv, CountVector(m));
  for (std::uint64_t i = 0; i < ninv; ++i)
    for (std::size_t d = 0; d < m; ++d) cvec[i][d] = (inv[i].fwd >> L.counting[d]) & 1u;
  for (OneType pi = 0; pi < P; ++pi)
    for (std::size_t d = 0; d < m; ++d) {
      LinearRow r;
      for (std::uint64_t lam = 0; lam < static_cast<std::uint64_t>(P) * ninv; ++lam)
        if (cvec[lam % ninv][d]) r.coefs.emplace_back(static_cast<std::uint32_t>(vs->x(pi, lam)), 1);
      std::uint64_t base = nx + static_cast<std::uint64_t>(pi) * nleaves * (U - 1);
      for (std::uint64_t j = 0; j < nleaves; ++j)
        for (std::uint64_t u = 1; u < U; ++u)
          if (dec[u][d])
            r.coefs.emplace_back(static_cast<std::uint32_t>(base + j * (U - 1) + (u - 1)),
                                 mpz_class(std::to_string(dec[u][d])));
      r.coefs.emplace_back(ncol(pi), -mpz_class(std::to_string(L.bounds[d])));
      mr.sys.add_row(std::move(r));
    }
  // Pairing x_λ = x_{λ⁻¹}.
  std::vector<std::int64_t> pos(std::size_t{1} << (2 * L.k), -1);
  auto word = [&](const Cross& c) {
    std::uint32_t w = 0;
    for (unsigned j = 0; j < L.k; ++j) w = (w << 2) | (((c.fwd >> j) & 1u) << 1) | ((c.rev >> j) & 1u);
    return w;
  };
  for (std::uint64_t i = 0; i < ninv; ++i) pos[word(inv[i])] = static_cast<std::int64_t>(i);
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t lam = 0; lam < static_cast<std::uint64_t>(P) * ninv; ++lam) {
      OneType to = static_cast<OneType>(lam / ninv);
      const Cross& c = inv[lam % ninv];
      std::uint64_t back = static_cast<std::uint64_t>(pi) * ninv + static_cast<std::uint64_t>(pos[word({c.rev, c.fwd})]);
      VarIndex a = vs->x(pi, lam), b = vs->x(to, back);
      if (a >= b) continue;
      LinearRow r;
      r.coefs.emplace_back(a, 1);
      r.coefs.emplace_back(b, -1);
      mr.sys.add_row(std::move(r));
    }
  LinearRow total;
  for (OneType pi = 0; pi < P; ++pi) total.coefs.emplace_back(ncol(pi), 1);
  total.rel = Rel::Ge;
  total.rhs = 1;
  mr.sys.add_row(std::move(total));
  return mr;
}

std::vector<mpz_class> scale_to_nat(const std::vector<mpq_class>& point) {
  mpz_class l = 1;
  for (const auto& q : point) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<mpz_class> out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    out[i] = point[i].get_num() * (l / point[i].get_den());
  }
  return out;
}

std::int64_t first_violation_nat(const ConstraintSet& cs, const std::vector<mpz_class>& theta) {
  if (theta.size() != cs.num_vars()) throw InvalidInput("assignment size mismatch");
  for (const auto& v : theta)
    if (v < 0) return 0;
  mpz_class s;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    s = 0;
    for (VarIndex t : c.terms) s += theta[t];
    bool ok = true;
    switch (c.kind) {
      case Kind::SumEq:
        ok = theta[c.target] == s;
        break;
      case Kind::SumGe1:
        ok = s >= 1;
        break;
      case Kind::Zero:
        ok = theta[c.target] == 0;
        break;
      case Kind::Cond:
        ok = theta[c.target] == 0 || s >= mpz_class(std::to_string(c.threshold));
        break;
    }
    if (!ok) return static_cast<std::int64_t>(i);
  }
  return -1;
}

mpz_class witness_domain_size(const ConstraintSet& cs, const std::vector<mpz_class>& theta) {
  const auto& vs = cs.space();
  if (!vs) throw InvalidInput("domain size needs a structured constraint set");
  mpz_class n = 0;
  for (OneType pi = 0; pi < vs->P(); ++pi)
    for (std::uint64_t u = 0; u < vs->U(); ++u) n += theta[vs->y(pi, 0, u)];
  return n;
}

std::optional<std::vector<mpz_class>> bounded_search(const ConstraintSet& cs, const std::vector<bool>& known_zero,
                                                     std::uint64_t bound, std::uint64_t max_nodes, bool* exhausted) {
  const std::uint64_t n = cs.num_vars();
  std::vector<std::uint32_t> order;
  for (std::uint32_t v = 0; v < n; ++v)
    if (!known_zero[v]) order.push_back(v);
  std::vector<std::int64_t> rank(n, -1);
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::int64_t>(i);
  // Constraint i is checked once the last of its free variables is assigned.
  std::vector<std::vector<std::size_t>> at(order.size() + 1);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    std::int64_t last = c.kind == Kind::SumGe1 ? -1 : rank[c.target];
    for (VarIndex t : c.terms) last = std::max(last, rank[t]);
    at[static_cast<std::size_t>(last + 1)].push_back(i);
  }
  std::vector<std::uint64_t> val(n, 0);
  auto ok = [&](std::size_t i) {
    ConstraintRef c = cs[i];
    std::uint64_t s = 0;
    for (VarIndex t : c.terms) s += val[t];
    switch (c.kind) {
      case Kind::SumEq:
        return val[c.target] == s;
      case Kind::SumGe1:
        return s >= 1;
      case Kind::Zero:
        return val[c.target] == 0;
      case Kind::Cond:
        return val[c.target] == 0 || s >= c.threshold;
    }
    return false;
  };
  for (std::size_t i : at[0])
    if (!ok(i)) {
      if (exhausted) *exhausted = true;
      return std::nullopt;
    }
  std::uint64_t nodes = 0;
  bool out_of_budget = false;
  // Iterative DFS: depth d assigns order[d].
  std::size_t d = 0;
  std::vector<std::uint64_t> next(order.size(), 0);
  const std::size_t depth = order.size();
  while (true) {
    if (d == depth) break;
    if (next[d] > bound) {
      next[d] = 0;
      val[order[d]] = 0;
      if (d == 0) {
        if (exhausted) *exhausted = true;
        return std::nullopt;
      }
      --d;
      continue;
    }
    if (++nodes > max_nodes) {
      out_of_budget = true;
      break;
    }
    val[order[d]] = next[d]++;
    bool good = true;
    for (std::size_t i : at[d + 1])
      if (!ok(i)) {
        good = false;
        break;
      }
    if (good) ++d;
  }
  if (out_of_budget) {
    if (exhausted) *exhausted = false;
    return std::nullopt;
  }
  std::vector<mpz_class> out(n);
  for (std::uint64_t v = 0; v < n; ++v) out[v] = static_cast<unsigned long>(val[v]);
  return out;
}

namespace {

void attach_witness(const ConstraintSet& cs, const LpResult& r, const FinsatOptions& opt,
                    const std::vector<bool>& zero, FinsatVerdict& v) {
  // E is homogeneous apart from the ≥1 and ≥D thresholds, so the gate-free part of the
  // point may be scaled freely as long as every active threshold is met afterwards.
  std::vector<mpq_class> head(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(cs.num_vars()));
  std::vector<mpz_class> all = scale_to_nat(head);
  mpz_class g = 0;
  for (const auto& a : all) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  if (g > 1)
    for (auto& a : all) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
  mpz_class k = 1;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    if (c.kind != Kind::Cond || all[c.target] == 0) continue;
    mpz_class s = 0;
    for (VarIndex t : c.terms) s += all[t];
    if (s == 0) throw InternalError("LP point leaves an active gate without support");
    mpz_class need = (mpz_class(std::to_string(c.threshold)) + s - 1) / s;
    if (need > k) k = need;
  }
  if (k > 1)
    for (auto& a : all) a *= k;
  if (first_violation_nat(cs, all) >= 0) throw InternalError("scaled LP witness violates E");
  v.witness = NatSolution{std::move(all)};
  if (!cs.space()) return;
  if (witness_domain_size(cs, v.witness->value) <= opt.caps.max_witness) return;
  v.witness_too_large = true;
  std::uint64_t free = std::count(zero.begin(), zero.end(), false);
  if (free > 64) return;
  for (std::uint64_t b = 1; b <= 64; b *= 2) {
    bool exhausted = false;
    auto small = bounded_search(cs, zero, b, 2'000'000, &exhausted);
    if (small && witness_domain_size(cs, *small) <= opt.caps.max_witness) {
      v.witness = NatSolution{std::move(*small)};
      v.witness_too_large = false;
      return;
    }
    if (!small && !exhausted) return;
  }
}

}  // namespace

FinsatVerdict decide_finsat(const ConstraintSet& cs, const FinsatOptions& opt) {
  FinsatVerdict v;
  HornResult hr = horn_sat(to_horn(cs));
  if (!hr.satisfiable) {
    v.verdict = Verdict::No;
    v.method = "horn";
    return v;
  }
  LpOptions lo;
  lo.max_pivots = opt.caps.max_pivots;
  std::string notes;
  if (opt.use_moment_relaxation && cs.space()) {
    MomentRelaxation mr = build_moment_relaxation(cs);
    std::vector<bool> kz(mr.sys.num_vars(), false);
    for (std::size_t c = 0; c < mr.source.size(); ++c) kz[c] = hr.zero[mr.source[c]];
    lo.known_zero = &kz;
    LpResult r = lp_feasible(mr.sys, lo);
    v.pivots += r.stats.pivots;
    if (r.status == LpStatus::Infeasible) {
      v.verdict = Verdict::No;
      v.method = "moment-relaxation";
      return v;
    }
    if (r.status == LpStatus::ResourceExceeded) notes += "moment relaxation: " + r.note + "; ";
  }
  std::vector<bool> kz = hr.zero;
  const std::uint64_t cond = cs.count(Kind::Cond);
  kz.resize(cs.num_vars() + cond, false);
  lo.known_zero = &kz;
  // Small H first: its vertices keep z and the gated sums close, so witnesses stay small.
  // Feasibility is monotone in H: once the largest small H fails, the rest are skipped.
  {
    std::vector<unsigned> shifts{0};
    if (opt.small_h_shift > 0) shifts.push_back(opt.small_h_shift);
    for (unsigned s : {4u, 10u})
      if (s < opt.small_h_shift) shifts.push_back(s);
    std::optional<FinsatVerdict> big;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      const unsigned sh = shifts[i];
      if (i >= 2 && !big) break;
      mpz_class h = mpz_class(std::to_string(max_threshold(cs))) << sh;
      LpResult r = lp_feasible(build_EH(cs, h), lo);
      v.pivots += r.stats.pivots;
      if (r.status == LpStatus::ResourceExceeded) {
        notes += "small H: " + r.note + "; ";
        break;
      }
      if (r.status != LpStatus::Feasible) continue;
      FinsatVerdict w = v;
      w.verdict = Verdict::Yes;
      w.method = "gated-small-H";
      attach_witness(cs, r, opt, hr.zero, w);
      w.note = notes;
      if (!w.witness_too_large) return w;
      if (!big) big = std::move(w);
    }
    if (big) {
      big->pivots = v.pivots;
      return *big;
    }
  }
  if (!opt.full_phase) {
    v.note = notes + "full phase disabled";
    return v;
  }
  mpz_class H = papadimitriou_bound(cs);
  v.h_bits = mpz_sizeinbase(H.get_mpz_t(), 2);
  LpResult r = lp_feasible(build_EH(cs, H), lo);
  v.pivots += r.stats.pivots;
  if (r.status == LpStatus::Feasible) {
    v.verdict = Verdict::Yes;
    v.method = "gated-full-H";
    attach_witness(cs, r, opt, hr.zero, v);
  } else if (r.status == LpStatus::Infeasible) {
    v.verdict = Verdict::No;
    v.method = "gated-full-H";
  } else {
    notes += "full H: " + r.note;
  }
  v.note = notes;
  return v;
}

}  // namespace gc2
