#include "gc2/model_builder.hpp"

#include <algorithm>
#include <unordered_set>

namespace gc2 {

namespace {

std::uint64_t value(const NatSolution& theta, VarIndex v) {
  const mpz_class& z = theta.value[v];
  if (!z.fits_ulong_p()) throw CapExceeded("witness value too large: " + z.get_str());
  return z.get_ui();
}

void require_solution(const ConstraintSet& cs, const NatSolution& theta) {
  if (theta.value.size() != cs.num_vars()) throw InvalidInput("solution has the wrong number of variables");
  if (!cs.space()) throw InvalidInput("constraint set carries no variable layout");
  std::int64_t bad = first_violation_nat(cs, theta.value);
  if (bad >= 0) throw InvalidInput("solution violates constraint " + std::to_string(bad));
}

// (v, w) with v + w = u, v increasing.
std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> split_table(const VectorRange& R) {
  const std::uint64_t U = R.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> split(U);
  std::vector<CountVector> dec(U);
  for (std::uint64_t i = 0; i < U; ++i) dec[i] = R.decode(i);
  for (std::uint64_t v = 0; v < U; ++v)
    for (std::uint64_t w = 0; w < U; ++w) {
      CountVector s(R.dim());
      for (std::size_t d = 0; d < R.dim(); ++d) s[d] = dec[v][d] + dec[w][d];
      if (R.contains(s)) split[R.encode(s)].emplace_back(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(w));
    }
  return split;
}

// Splits one tree top-down. `var(node, u)` and `hat(node, v, w)` read θ.
template <class Var, class Hat>
std::vector<std::vector<std::uint32_t>> split_tree(std::uint64_t nodes, std::uint64_t size, std::uint64_t U,
                                                   std::vector<std::uint32_t> root,
                                                   const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& split,
                                                   Var var, Hat hat) {
  std::vector<std::vector<std::uint32_t>> fn(nodes);
  fn[0] = std::move(root);
  const std::uint64_t internal = (nodes - 1) / 2;
  std::vector<std::vector<std::uint64_t>> pre(U);
  for (std::uint64_t n = 0; n < internal; ++n) {
    for (auto& v : pre) v.clear();
    for (std::uint64_t a = 0; a < size; ++a) pre[fn[n][a]].push_back(a);
    auto& left = fn[2 * n + 1];
    auto& right = fn[2 * n + 2];
    left.assign(size, 0);
    right.assign(size, 0);
    for (std::uint64_t u = 0; u < U; ++u) {
      if (pre[u].size() != var(n, u)) throw InternalError("preimage size disagrees with θ");
      std::size_t at = 0;
      for (auto [v, w] : split[u]) {
        std::uint64_t k = hat(n, v, w);
        if (at + k > pre[u].size()) throw InternalError("split pieces exceed the preimage");
        for (std::uint64_t i = 0; i < k; ++i, ++at) {
          left[pre[u][at]] = v;
          right[pre[u][at]] = w;
        }
      }
      if (at != pre[u].size()) throw InternalError("split pieces do not cover the preimage");
    }
  }
  return fn;
}

FGBlock build_fg_checked(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta, OneType pi,
                         const std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>& split) {
  const VarSpace& vs = *cs.space();
  const VectorRange& R = vs.range();
  const std::uint64_t U = R.size();
  FGBlock out;
  out.pi = pi;
  std::vector<std::uint32_t> froot, groot;
  const auto& C = R.bounds();
  for (std::uint64_t u = 0; u < U; ++u) {
    std::uint64_t k = value(theta, vs.y(pi, 0, u));
    CountVector c = R.decode(u);
    for (std::size_t d = 0; d < c.size(); ++d) c[d] = C[d] - c[d];
    std::uint32_t cu = static_cast<std::uint32_t>(R.encode(c));
    froot.insert(froot.end(), k, static_cast<std::uint32_t>(u));
    groot.insert(groot.end(), k, cu);
  }
  out.size = froot.size();
  (void)ts;
  out.f = split_tree(
      vs.y_nodes(), out.size, U, std::move(froot), split,
      [&](std::uint64_t n, std::uint64_t u) { return value(theta, vs.y(pi, n, u)); },
      [&](std::uint64_t n, std::uint64_t v, std::uint64_t w) { return value(theta, vs.yh(pi, n, v, w)); });
  out.g = split_tree(
      vs.z_nodes(), out.size, U, std::move(groot), split,
      [&](std::uint64_t n, std::uint64_t u) { return value(theta, vs.z(pi, n, u)); },
      [&](std::uint64_t n, std::uint64_t v, std::uint64_t w) { return value(theta, vs.zh(pi, n, v, w)); });
  return out;
}

MessagePlan plan_checked(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta, const FGBlock& fg) {
  const VarSpace& vs = *cs.space();
  const VectorRange& R = vs.range();
  const std::uint64_t ninv = vs.num_inv();
  const std::uint64_t yleaf0 = vs.y_nodes() / 2, zleaf0 = vs.z_nodes() / 2;
  MessagePlan plan;
  plan.pi = fg.pi;
  plan.senders.resize(fg.size);
  std::vector<std::uint64_t> inv_c(ninv);
  for (std::uint64_t i = 0; i < ninv; ++i) inv_c[i] = ts.c_index({0, 0, vs.invertible_patterns()[i]});
  std::vector<std::uint64_t> pre;
  for (OneType leaf = 0; leaf < ts.P(); ++leaf) {
    const auto& fl = fg.f[yleaf0 + leaf];
    for (std::uint64_t u = 1; u < R.size(); ++u) {
      pre.clear();
      for (std::uint64_t a = 0; a < fg.size; ++a)
        if (fl[a] == u) pre.push_back(a);
      std::size_t at = 0;
      for (std::uint64_t i = 0; i < ninv; ++i) {
        if (inv_c[i] != u) continue;
        std::uint64_t lam = leaf * ninv + i;
        std::uint64_t k = value(theta, vs.x(fg.pi, lam));
        if (at + k > pre.size()) throw InternalError("A_λ pieces exceed the leaf preimage");
        for (std::uint64_t j = 0; j < k; ++j, ++at) plan.senders[pre[at]].invertible.emplace_back(leaf, lam);
      }
      if (at != pre.size()) throw InternalError("A_λ pieces do not cover the leaf preimage");
    }
  }
  for (std::uint64_t j = 0; j < ts.Q(); ++j) {
    const auto& gl = fg.g[zleaf0 + j];
    CountVector cm = ts.c_vector(ts.m_entry(fg.pi, j));
    std::size_t d0 = 0;
    while (d0 < cm.size() && cm[d0] == 0) ++d0;
    for (std::uint64_t a = 0; a < fg.size; ++a) {
      if (gl[a] == 0) continue;
      if (d0 == cm.size()) throw InternalError("silent leaf carries a tally");
      CountVector u = R.decode(gl[a]);
      std::uint64_t n = u[d0] / cm[d0];
      for (std::size_t d = 0; d < cm.size(); ++d)
        if (u[d] != n * cm[d]) throw InternalError("tally is not a multiple of its message vector");
      plan.senders[a].counted.emplace_back(j, n);
    }
  }
  return plan;
}

std::uint64_t pair_key(Element a, Element b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void set_type(Structure& st, const TypeSpace& ts, Element a, Element b, const Cross& c) {
  for (unsigned r = 0; r < ts.k(); ++r) {
    if ((c.fwd >> r) & 1u) st.add_edge(r, a, b);
    if ((c.rev >> r) & 1u) st.add_edge(r, b, a);
  }
}

}  // namespace

FGBlock build_fg(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta, OneType pi) {
  require_solution(cs, theta);
  if (pi >= ts.P()) throw InvalidInput("1-type out of range");
  return build_fg_checked(ts, cs, theta, pi, split_table(cs.space()->range()));
}

MessagePlan plan_messages(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta,
                          const FGBlock& fg) {
  require_solution(cs, theta);
  return plan_checked(ts, cs, theta, fg);
}

Structure build_model(const TypeSpace& ts, const ConstraintSet& cs, const NatSolution& theta,
                      std::uint64_t max_witness) {
  require_solution(cs, theta);
  mpz_class domain = witness_domain_size(cs, theta.value);
  if (domain > max_witness || domain > UINT32_MAX)
    throw CapExceeded("witness domain " + domain.get_str() + " exceeds the cap " + std::to_string(max_witness));
  if (domain == 0) throw InvalidInput("solution describes an empty domain");
  const VarSpace& vs = *cs.space();
  const auto split = split_table(vs.range());

  // Blocks in π order.
  std::vector<MessagePlan> plans;
  std::vector<Element> first(ts.P() + 1, 0);
  Element n = 0;
  for (OneType pi = 0; pi < ts.P(); ++pi) {
    first[pi] = n;
    FGBlock fg = build_fg_checked(ts, cs, theta, pi, split);
    n += static_cast<Element>(fg.size);
    plans.push_back(plan_checked(ts, cs, theta, fg));
  }
  first[ts.P()] = n;
  const Signature& sig = ts.problem().sig;
  Structure st(sig, n);
  for (OneType pi = 0; pi < ts.P(); ++pi)
    for (Element a = first[pi]; a < first[pi + 1]; ++a) {
      for (unsigned u = 0; u < ts.num_unary(); ++u)
        if (ts.unary_holds(pi, u)) st.set_unary(u, a);
      for (unsigned r = 0; r < ts.k(); ++r)
        if (ts.self_holds(pi, r)) st.add_edge(r, a, a);
    }

  std::unordered_set<std::uint64_t> assigned;
  auto claim = [&](Element a, Element b) {
    if (!assigned.insert(pair_key(a, b)).second)
      throw InternalError("pair " + std::to_string(a) + "," + std::to_string(b) + " assigned twice");
  };

  // Invertible pairs: senders of λ meet senders of λ⁻¹ in index order.
  {
    std::vector<std::vector<Element>> senders(static_cast<std::size_t>(ts.P()) * ts.lambda_size());
    for (OneType pi = 0; pi < ts.P(); ++pi)
      for (std::size_t i = 0; i < plans[pi].senders.size(); ++i)
        for (auto [leaf, lam] : plans[pi].senders[i].invertible)
          senders[pi * ts.lambda_size() + lam].push_back(first[pi] + static_cast<Element>(i));
    for (OneType pi = 0; pi < ts.P(); ++pi)
      for (std::uint64_t lam = 0; lam < ts.lambda_size(); ++lam) {
        TwoType t = ts.lambda_entry(pi, lam);
        TwoType inv = invert(t);
        std::uint64_t ilam = static_cast<std::uint64_t>(ts.lambda_index(inv));
        std::size_t here = pi * ts.lambda_size() + lam, there = inv.pi1 * ts.lambda_size() + ilam;
        if (here >= there) continue;
        const auto& A = senders[here];
        const auto& B = senders[there];
        if (A.size() != B.size()) throw InternalError("x_λ and x_λ⁻¹ differ");
        for (std::size_t i = 0; i < A.size(); ++i) {
          claim(A[i], B[i]);
          set_type(st, ts, A[i], B[i], t.cross);
        }
      }
  }

  // Messages by thirds: a in third j sends to third j+1 mod 3 of the receiving block.
  auto third_begin = [&](OneType pi, unsigned j) -> Element {
    Element size = first[pi + 1] - first[pi];
    Element c0 = (size + 2) / 3;
    Element c1 = (size - c0 + 1) / 2;
    Element off[4] = {0, c0, c0 + c1, size};
    return first[pi] + off[j];
  };
  for (OneType pi = 0; pi < ts.P(); ++pi)
    for (unsigned j = 0; j < 3; ++j)
      for (Element a = third_begin(pi, j); a < third_begin(pi, j + 1); ++a) {
        const auto& snd = plans[pi].senders[a - first[pi]];
        for (auto [pos, count] : snd.counted) {
          TwoType mu = ts.m_entry(pi, pos);
          OneType rho = mu.pi2;
          unsigned jr = (j + 1) % 3;
          Element b = third_begin(rho, jr), end = third_begin(rho, jr + 1);
          for (std::uint64_t c = 0; c < count; ++c) {
            while (b < end && (b == a || assigned.count(pair_key(a, b)))) ++b;
            if (b == end) throw InternalError("ran out of receivers for element " + std::to_string(a));
            claim(a, b);
            set_type(st, ts, a, b, mu.cross);
            ++b;
          }
        }
      }

  // Remaining pairs keep the fill type, which has no cross atoms.
  NormalFormReport rep = check_normal_form(ts, st);
  if (!rep.ok()) throw InternalError("assembled structure fails the checker: " + rep.describe());
  if (!is_chromatic(ts, st)) throw InternalError("assembled structure is not chromatic");
  return st;
}

}  // namespace gc2
