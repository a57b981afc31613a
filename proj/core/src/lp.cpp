#include "gc2/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>

namespace gc2 {

namespace {

using Coefs = std::vector<std::pair<std::uint32_t, mpz_class>>;

void canonicalize(Coefs& c) {
  std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Coefs out;
  for (auto& [j, a] : c) {
    if (!out.empty() && out.back().first == j) out.back().second += a;
    else out.emplace_back(j, std::move(a));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }), out.end());
  c = std::move(out);
}

// Divides the row by the gcd of its coefficients and constant.
void reduce(Coefs& c, mpz_class& rhs) {
  mpz_class g = rhs;
  for (const auto& e : c) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (auto& e : c) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(rhs.get_mpz_t(), rhs.get_mpz_t(), g.get_mpz_t());
}

const mpz_class* coef_of(const Coefs& c, std::uint32_t j) {
  auto it = std::lower_bound(c.begin(), c.end(), j, [](const auto& e, std::uint32_t v) { return e.first < v; });
  return it != c.end() && it->first == j ? &it->second : nullptr;
}

bool holds(Rel rel, const mpq_class& lhs, const mpq_class& rhs) {
  switch (rel) {
    case Rel::Eq:
      return lhs == rhs;
    case Rel::Ge:
      return lhs >= rhs;
    case Rel::Le:
      return lhs <= rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Presolve

struct Postsolve {
  std::uint32_t col;
  Coefs expr;  // empty: fixed at zero
};

class Presolver {
 public:
  Presolver(const LinearSystem& sys) : n_(sys.num_vars()) {
    rows_.reserve(sys.size());
    for (const auto& r : sys.rows()) rows_.push_back(r);
    alive_.assign(rows_.size(), true);
    occ_.resize(n_);
    done_.assign(n_, false);
    for (std::uint32_t i = 0; i < rows_.size(); ++i)
      for (const auto& e : rows_[i].coefs) occ_[e.first].push_back(i);
    for (std::uint32_t i = 0; i < rows_.size(); ++i) dirty_.push_back(i);
  }

  bool infeasible = false;

  void fix_zero(std::uint32_t v) {
    if (done_[v]) return;
    done_[v] = true;
    stack_.push_back({v, {}});
    for (std::uint32_t r : occ_[v]) {
      if (!alive_[r]) continue;
      auto& c = rows_[r].coefs;
      auto it = std::lower_bound(c.begin(), c.end(), v, [](const auto& e, std::uint32_t x) { return e.first < x; });
      if (it != c.end() && it->first == v) {
        c.erase(it);
        dirty_.push_back(r);
      }
    }
    occ_[v].clear();
  }

  void substitute(std::uint32_t v, Coefs expr) {
    done_[v] = true;
    for (std::uint32_t r : occ_[v]) {
      if (!alive_[r]) continue;
      auto& c = rows_[r].coefs;
      const mpz_class* e = coef_of(c, v);
      if (!e) continue;
      mpz_class ev = *e;
      for (const auto& [j, w] : expr) {
        c.emplace_back(j, ev * w);
        occ_[j].push_back(r);
      }
      c.emplace_back(v, -ev);
      canonicalize(c);
      reduce(c, rows_[r].rhs);
      dirty_.push_back(r);
    }
    occ_[v].clear();
    stack_.push_back({v, std::move(expr)});
  }

  void run(const std::vector<bool>* known_zero) {
    if (known_zero)
      for (std::uint32_t v = 0; v < n_; ++v)
        if ((*known_zero)[v]) fix_zero(v);
    for (;;) {
      drain();
      if (infeasible) return;
      bool changed = columns();
      if (infeasible) return;
      if (!changed) changed = eliminate();
      if (!changed && dirty_.empty()) return;
    }
  }

  std::vector<LinearRow> take_rows(std::vector<std::uint32_t>& cols) {
    std::vector<LinearRow> out;
    std::vector<std::int64_t> map(n_, -1);
    for (std::uint32_t i = 0; i < rows_.size(); ++i) {
      if (!alive_[i]) continue;
      for (auto& e : rows_[i].coefs) {
        if (map[e.first] < 0) {
          map[e.first] = static_cast<std::int64_t>(cols.size());
          cols.push_back(e.first);
        }
        e.first = static_cast<std::uint32_t>(map[e.first]);
      }
      std::sort(rows_[i].coefs.begin(), rows_[i].coefs.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(rows_[i]));
    }
    return out;
  }

  // Columns neither solved nor eliminated are zero.
  void finish(std::vector<mpq_class>& x) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      mpq_class v = 0;
      for (const auto& [j, w] : it->expr) v += mpq_class(w) * x[j];
      x[it->col] = v;
    }
  }

 private:
  void kill(std::uint32_t r) { alive_[r] = false; }

  void drain() {
    while (!dirty_.empty() && !infeasible) {
      std::uint32_t r = dirty_.back();
      dirty_.pop_back();
      if (alive_[r]) check_row(r);
    }
  }

  void check_row(std::uint32_t r) {
    LinearRow& row = rows_[r];
    reduce(row.coefs, row.rhs);
    if (row.coefs.empty()) {
      if (!holds(row.rel, 0, row.rhs)) infeasible = true;
      kill(r);
      return;
    }
    bool allpos = true, allneg = true;
    for (const auto& e : row.coefs) {
      if (e.second > 0) allneg = false;
      else allpos = false;
    }
    // Normalize to Eq or Ge with the same sign pattern handled below.
    if (row.rel == Rel::Le) {
      for (auto& e : row.coefs) e.second = -e.second;
      row.rhs = -row.rhs;
      row.rel = Rel::Ge;
      std::swap(allpos, allneg);
    }
    if (row.rhs == 0 && (allneg || (allpos && row.rel == Rel::Eq))) {
      std::vector<std::uint32_t> vars;
      for (const auto& e : row.coefs) vars.push_back(e.first);
      kill(r);
      for (auto v : vars) fix_zero(v);
      return;
    }
    if (row.rel == Rel::Ge && allpos && row.rhs <= 0) {
      kill(r);
      return;
    }
    if ((allneg && row.rhs > 0) || (row.rel == Rel::Eq && allpos && row.rhs < 0)) {
      infeasible = true;
      return;
    }
    if (row.rel == Rel::Eq && row.rhs == 0 && row.coefs.size() == 2 && row.coefs[0].second == -row.coefs[1].second) {
      std::uint32_t keep = row.coefs[0].first, drop = row.coefs[1].first;
      kill(r);
      Coefs e;
      e.emplace_back(keep, 1);
      substitute(drop, std::move(e));
    }
  }

  std::size_t live_count(std::uint32_t v, std::uint32_t* last) {
    auto& o = occ_[v];
    std::size_t w = 0;
    for (std::size_t i = 0; i < o.size(); ++i) {
      std::uint32_t r = o[i];
      if (!alive_[r] || !coef_of(rows_[r].coefs, v)) continue;
      if (w && o[w - 1] == r) continue;
      o[w++] = r;
    }
    o.resize(w);
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
    if (!o.empty()) *last = o.back();
    return o.size();
  }

  bool columns() {
    bool changed = false;
    for (std::uint32_t v = 0; v < n_; ++v) {
      if (done_[v]) continue;
      std::uint32_t r = 0;
      std::size_t cnt = live_count(v, &r);
      if (cnt == 0) {
        fix_zero(v);
        changed = true;
      } else if (cnt == 1) {
        const LinearRow& row = rows_[r];
        const mpz_class* a = coef_of(row.coefs, v);
        if ((row.rel == Rel::Ge && *a < 0) || (row.rel == Rel::Le && *a > 0)) {
          fix_zero(v);
          changed = true;
        }
      }
      if (!dirty_.empty()) drain();
      if (infeasible) return true;
    }
    return changed;
  }

  // Eq row c·t + Σ a_j x_j = 0 with |c| = 1 and every a_j of the opposite sign
  // defines t as a nonnegative combination; t is substituted away.
  bool eliminate() {
    bool changed = false;
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
      if (!alive_[r]) continue;
      const LinearRow& row = rows_[r];
      if (row.rel != Rel::Eq || row.rhs != 0 || row.coefs.size() < 2) continue;
      int pos = 0, neg = 0;
      for (const auto& e : row.coefs) (e.second > 0 ? pos : neg)++;
      std::int64_t best = -1;
      std::size_t best_cost = kFillLimit + 1;
      for (std::size_t i = 0; i < row.coefs.size(); ++i) {
        const auto& [t, c] = row.coefs[i];
        if (c != 1 && c != -1) continue;
        if ((c > 0 && pos != 1) || (c < 0 && neg != 1)) continue;
        std::uint32_t last;
        std::size_t cnt = live_count(t, &last);
        std::size_t cost = (cnt - 1) * (row.coefs.size() - 1);
        if (cost < best_cost) {
          best_cost = cost;
          best = static_cast<std::int64_t>(i);
        }
      }
      if (best < 0) continue;
      std::uint32_t t = row.coefs[best].first;
      mpz_class c = row.coefs[best].second;
      Coefs expr;
      for (const auto& [j, a] : row.coefs)
        if (j != t) expr.emplace_back(j, -a * c);
      kill(r);
      substitute(t, std::move(expr));
      drain();
      if (infeasible) return true;
      changed = true;
    }
    return changed;
  }

  static constexpr std::size_t kFillLimit = 64;

  std::uint64_t n_;
  std::vector<LinearRow> rows_;
  std::vector<bool> alive_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<bool> done_;
  std::vector<std::uint32_t> dirty_;
  std::vector<Postsolve> stack_;
};

// ---------------------------------------------------------------------------
// Fraction-free simplex. Row i reads Σ_j val_j x_j = rhs with its basic column
// carrying a positive coefficient and all other basic columns absent.

struct SRow {
  std::vector<std::uint32_t> idx;
  std::vector<mpz_class> val;
  mpz_class rhs;
  std::uint32_t basic = 0;

  const mpz_class* at(std::uint32_t j) const {
    auto it = std::lower_bound(idx.begin(), idx.end(), j);
    return it != idx.end() && *it == j ? &val[it - idx.begin()] : nullptr;
  }
};

void normalize(SRow& r) {
  mpz_class g = r.rhs;
  for (const auto& v : r.val) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (auto& v : r.val) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(r.rhs.get_mpz_t(), r.rhs.get_mpz_t(), g.get_mpz_t());
}

// r := ar·r − ap·p, with column j cancelling.
void combine(SRow& r, const mpz_class& ar, const SRow& p, const mpz_class& ap, std::uint32_t j, SRow& scratch) {
  scratch.idx.clear();
  scratch.val.resize(r.idx.size() + p.idx.size());
  std::size_t a = 0, b = 0, n = 0;
  mpz_class t;
  while (a < r.idx.size() || b < p.idx.size()) {
    std::uint32_t ca = a < r.idx.size() ? r.idx[a] : UINT32_MAX;
    std::uint32_t cb = b < p.idx.size() ? p.idx[b] : UINT32_MAX;
    if (ca == j && cb == j) {
      ++a, ++b;
      continue;
    }
    mpz_class& out = scratch.val[n];
    std::uint32_t col;
    if (ca < cb) {
      out = ar * r.val[a++];
      col = ca;
    } else if (cb < ca) {
      out = -ap * p.val[b++];
      col = cb;
    } else {
      out = ar * r.val[a++];
      t = ap * p.val[b++];
      out -= t;
      col = ca;
    }
    if (out != 0) {
      scratch.idx.push_back(col);
      ++n;
    }
  }
  scratch.val.resize(n);
  r.rhs = ar * r.rhs - ap * p.rhs;
  std::swap(r.idx, scratch.idx);
  std::swap(r.val, scratch.val);
  normalize(r);
}

LpResult simplex(const std::vector<LinearRow>& rows, std::uint64_t ncols, const LpOptions& opt) {
  LpResult res;
  const std::uint32_t n = static_cast<std::uint32_t>(ncols);
  std::vector<SRow> T(rows.size());
  std::uint32_t next = n;
  std::vector<std::uint32_t> slack_of(rows.size(), UINT32_MAX);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].rel != Rel::Eq) slack_of[i] = next++;
  const std::uint32_t first_art = next;
  SRow obj;
  std::vector<std::pair<std::uint32_t, mpz_class>> acc;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LinearRow& lr = rows[i];
    SRow& r = T[i];
    for (const auto& [j, a] : lr.coefs) {
      r.idx.push_back(j);
      r.val.push_back(a);
    }
    r.rhs = lr.rhs;
    if (slack_of[i] != UINT32_MAX) {
      r.idx.push_back(slack_of[i]);
      r.val.push_back(lr.rel == Rel::Le ? 1 : -1);
    }
    if (r.rhs < 0) {
      for (auto& v : r.val) v = -v;
      r.rhs = -r.rhs;
    }
    normalize(r);
    if (slack_of[i] != UINT32_MAX && *r.at(slack_of[i]) == 1) {
      r.basic = slack_of[i];
      continue;
    }
    for (std::size_t e = 0; e < r.idx.size(); ++e) acc.emplace_back(r.idx[e], r.val[e]);
    obj.rhs += r.rhs;
    r.basic = next++;
    r.idx.push_back(r.basic);
    r.val.push_back(1);
  }
  canonicalize(acc);
  for (auto& [j, a] : acc) {
    obj.idx.push_back(j);
    obj.val.push_back(std::move(a));
  }

  auto extract = [&]() {
    res.point.assign(n, 0);
    for (const auto& r : T)
      if (r.basic < n) res.point[r.basic] = mpq_class(r.rhs, *r.at(r.basic));
    for (auto& q : res.point) q.canonicalize();
  };

  SRow scratch;
  bool bland = false;
  std::uint64_t stall = 0;
  constexpr std::uint64_t kStall = 50;
  for (;;) {
    if (obj.rhs == 0) {
      res.status = LpStatus::Feasible;
      extract();
      return res;
    }
    std::int64_t enter = -1;
    for (std::size_t e = 0; e < obj.idx.size(); ++e) {
      std::uint32_t j = obj.idx[e];
      if (j >= first_art || obj.val[e] <= 0) continue;
      if (enter < 0) {
        enter = static_cast<std::int64_t>(e);
        if (bland) break;
      } else if (obj.val[e] > obj.val[enter]) {
        enter = static_cast<std::int64_t>(e);
      }
    }
    if (enter < 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    if (res.stats.pivots >= opt.max_pivots) {
      res.status = LpStatus::ResourceExceeded;
      res.note = "pivot limit reached";
      return res;
    }
    const std::uint32_t j = obj.idx[enter];
    std::int64_t leave = -1;
    mpz_class lhs, rhs;
    for (std::size_t i = 0; i < T.size(); ++i) {
      const mpz_class* a = T[i].at(j);
      if (!a || *a <= 0) continue;
      if (leave < 0) {
        leave = static_cast<std::int64_t>(i);
        continue;
      }
      const SRow& L = T[leave];
      const mpz_class* al = L.at(j);
      lhs = T[i].rhs * *al;
      rhs = L.rhs * *a;
      // Ties: artificial columns leave first, otherwise the smaller basic index.
      const bool ai = T[i].basic >= first_art, al_ = L.basic >= first_art;
      if (lhs < rhs || (lhs == rhs && (ai != al_ ? ai : T[i].basic < L.basic))) leave = static_cast<std::int64_t>(i);
    }
    if (leave < 0) throw InternalError("phase-1 objective unbounded");
    const bool degenerate = T[leave].rhs == 0;
    const SRow P = T[leave];
    const mpz_class ap = *P.at(j);
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (static_cast<std::int64_t>(i) == leave) continue;
      const mpz_class* a = T[i].at(j);
      if (!a) continue;
      mpz_class ai = *a;
      combine(T[i], ap, P, ai, j, scratch);
    }
    {
      mpz_class c = obj.val[enter];
      combine(obj, ap, P, c, j, scratch);
    }
    T[leave].basic = j;
    ++res.stats.pivots;
    if (degenerate) {
      if (++stall >= kStall) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
  }
}

// ---------------------------------------------------------------------------
// Floating-point guide: a dense phase-1 simplex on the system with bounds shifted
// to x_j ≥ −δ_j proposes a basis. Its output is only used through the exact checks
// certify_support and certify_farkas.

constexpr std::size_t kGuideMinRows = 40;
constexpr std::uint64_t kGuideMaxCells = 60'000'000;  // doubles in the dense tableau

struct Guide {
  enum class Kind : std::uint8_t { Feasible, Infeasible, Failed };
  Kind kind = Kind::Failed;
  std::vector<std::uint32_t> support;  // structural j < n, slack of row i as n + i
  std::vector<double> dual;            // Farkas multipliers of the rows as given
  std::uint64_t pivots = 0;
};

Guide float_guide(const std::vector<LinearRow>& rows, std::uint32_t n, std::uint64_t max_pivots,
                  std::uint64_t max_cells) {
  Guide g;
  const std::size_t m = rows.size();
  std::vector<std::int64_t> slack(m, -1);
  std::uint32_t W = n;
  for (std::size_t i = 0; i < m; ++i)
    if (rows[i].rel != Rel::Eq) slack[i] = W++;
  const std::uint32_t first_art = W;
  std::vector<double> sgn_slack(m, 0), b(m), bp(m);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> pert(1e-6, 2e-6);
  std::vector<double> delta(first_art);
  for (auto& d : delta) d = pert(rng);
  std::vector<double> flip(m, 1);
  std::vector<std::uint32_t> basic(m), ident(m);
  std::uint32_t nart = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const LinearRow& r = rows[i];
    if (slack[i] >= 0) sgn_slack[i] = r.rel == Rel::Le ? 1.0 : -1.0;
    b[i] = r.rhs.get_d();
    bp[i] = b[i];
    for (const auto& [j, a] : r.coefs) bp[i] += a.get_d() * delta[j];
    if (slack[i] >= 0) bp[i] += sgn_slack[i] * delta[slack[i]];
    if (bp[i] < 0) flip[i] = -1;
    if (slack[i] >= 0 && sgn_slack[i] * flip[i] > 0) ident[i] = static_cast<std::uint32_t>(slack[i]);
    else ident[i] = first_art + nart++;
    basic[i] = ident[i];
  }
  const std::uint64_t Wt = first_art + nart;
  if (m * Wt > max_cells) return g;
  std::vector<double> T(m * Wt, 0.0), rp(m), ro(m), d(Wt, 0.0);
  double w = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double* row = &T[i * Wt];
    for (const auto& [j, a] : rows[i].coefs) row[j] = flip[i] * a.get_d();
    if (slack[i] >= 0) row[slack[i]] = flip[i] * sgn_slack[i];
    row[ident[i]] = 1.0;
    rp[i] = flip[i] * bp[i];
    ro[i] = flip[i] * b[i];
    if (ident[i] >= first_art) {
      for (std::uint64_t k = 0; k < Wt; ++k) d[k] += row[k];
      w += rp[i];
    }
  }
  constexpr double kPiv = 1e-9, kFeas = 1e-9, kDrop = 1e-12;
  std::vector<std::uint32_t> nz;
  for (;;) {
    if (w <= kFeas) {
      g.kind = Guide::Kind::Feasible;
      break;
    }
    std::int64_t enter = -1;
    double best = kPiv;
    for (std::uint32_t j = 0; j < first_art; ++j)
      if (d[j] > best) {
        best = d[j];
        enter = j;
      }
    if (enter < 0) {
      g.kind = Guide::Kind::Infeasible;
      break;
    }
    if (g.pivots >= max_pivots) return g;
    const std::uint32_t j = static_cast<std::uint32_t>(enter);
    // Harris ratio test.
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double a = T[i * Wt + j];
      if (a > kPiv) theta = std::min(theta, (std::max(rp[i], 0.0) + kFeas) / a);
    }
    std::int64_t leave = -1;
    double pbest = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double a = T[i * Wt + j];
      if (a <= kPiv || std::max(rp[i], 0.0) / a > theta) continue;
      bool art = basic[i] >= first_art;
      bool better = leave < 0 || (art && basic[leave] < first_art) ||
                    (art == (basic[leave] >= first_art) && a > pbest);
      if (better) {
        leave = static_cast<std::int64_t>(i);
        pbest = a;
      }
    }
    if (leave < 0) return g;
    const std::size_t r = static_cast<std::size_t>(leave);
    double* pr = &T[r * Wt];
    const double inv = 1.0 / pr[j];
    nz.clear();
    for (std::uint64_t k = 0; k < Wt; ++k) {
      if (pr[k] == 0.0) continue;
      pr[k] *= inv;
      if (std::abs(pr[k]) < kDrop) pr[k] = 0.0;
      else nz.push_back(static_cast<std::uint32_t>(k));
    }
    pr[j] = 1.0;
    rp[r] *= inv;
    ro[r] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      double* pi = &T[i * Wt];
      const double f = pi[j];
      if (f == 0.0) continue;
      for (std::uint32_t k : nz) {
        double v = pi[k] - f * pr[k];
        pi[k] = std::abs(v) < kDrop ? 0.0 : v;
      }
      pi[j] = 0.0;
      rp[i] -= f * rp[r];
      ro[i] -= f * ro[r];
      if (rp[i] < 0 && rp[i] > -kFeas) rp[i] = 0;
    }
    const double f = d[j];
    for (std::uint32_t k : nz) d[k] -= f * pr[k];
    d[j] = 0.0;
    w -= f * rp[r];
    basic[r] = j;
    ++g.pivots;
  }
  if (g.kind == Guide::Kind::Feasible) {
    for (std::size_t i = 0; i < m; ++i) {
      if (basic[i] >= first_art || ro[i] <= kFeas) continue;
      g.support.push_back(basic[i] < n ? basic[i] : n + static_cast<std::uint32_t>(
                                                            std::find(slack.begin(), slack.end(), basic[i]) - slack.begin()));
    }
    std::sort(g.support.begin(), g.support.end());
  } else {
    // Phase-1 multipliers c_B B⁻¹: the reduced-cost row at the starting identity columns.
    g.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) g.dual[i] = flip[i] * d[ident[i]];
  }
  return g;
}

// Continued-fraction approximation with denominator at most max_den.
mpq_class rationalize(double v, long max_den) {
  if (std::abs(v) < 1e-9) return 0;
  const bool neg = v < 0;
  double x = std::abs(v);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 40; ++it) {
    double a = std::floor(x);
    mpz_class ai(a);
    mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    double frac = x - a;
    if (frac < 1e-12) break;
    x = 1.0 / frac;
  }
  mpq_class r(p1, q1);
  r.canonicalize();
  return neg ? mpq_class(-r) : r;
}

// Exact point whose nonzero columns lie in `support` (structural j < n, slack n + i).
std::optional<std::vector<mpq_class>> certify_support(const std::vector<LinearRow>& rows, std::uint32_t n,
                                                      const std::vector<std::uint32_t>& support) {
  const std::size_t m = rows.size();
  // Columns renumbered 0..|S|-1 in support order.
  std::vector<std::int64_t> local(n, -1);
  std::vector<std::int64_t> slack_local(m, -1);
  for (std::size_t c = 0; c < support.size(); ++c) {
    if (support[c] < n) local[support[c]] = static_cast<std::int64_t>(c);
    else slack_local[support[c] - n] = static_cast<std::int64_t>(c);
  }
  std::vector<SRow> R;
  for (std::size_t i = 0; i < m; ++i) {
    SRow r;
    std::vector<std::pair<std::uint32_t, mpz_class>> e;
    for (const auto& [j, a] : rows[i].coefs)
      if (local[j] >= 0) e.emplace_back(static_cast<std::uint32_t>(local[j]), a);
    if (slack_local[i] >= 0) e.emplace_back(static_cast<std::uint32_t>(slack_local[i]), rows[i].rel == Rel::Le ? 1 : -1);
    if (e.empty()) {
      if (rows[i].rhs != 0) return std::nullopt;
      continue;
    }
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [j, a] : e) {
      r.idx.push_back(j);
      r.val.push_back(std::move(a));
    }
    r.rhs = rows[i].rhs;
    R.push_back(std::move(r));
  }
  const std::size_t S = support.size();
  std::vector<std::int64_t> pivot_row(S, -1);
  std::vector<bool> used(R.size(), false);
  SRow scratch;
  for (std::uint32_t c = 0; c < S; ++c) {
    std::int64_t p = -1;
    for (std::size_t i = 0; i < R.size(); ++i)
      if (!used[i] && R[i].at(c) && (p < 0 || R[i].idx.size() < R[p].idx.size())) p = static_cast<std::int64_t>(i);
    if (p < 0) continue;
    used[p] = true;
    pivot_row[c] = p;
    const SRow P = R[p];
    const mpz_class ap = *P.at(c);
    for (std::size_t i = 0; i < R.size(); ++i) {
      if (static_cast<std::int64_t>(i) == p) continue;
      const mpz_class* a = R[i].at(c);
      if (!a) continue;
      mpz_class ai = *a;
      combine(R[i], ap, P, ai, c, scratch);
    }
  }
  // Free columns are zero; a row left without pivot must read 0 = 0.
  std::vector<mpq_class> xs(S, 0);
  for (std::size_t i = 0; i < R.size(); ++i)
    if (!used[i] && R[i].rhs != 0) {
      bool only_free = true;
      for (auto c : R[i].idx) only_free = only_free && pivot_row[c] < 0;
      if (only_free) return std::nullopt;
    }
  for (std::uint32_t c = 0; c < S; ++c) {
    if (pivot_row[c] < 0) continue;
    const SRow& P = R[pivot_row[c]];
    xs[c] = mpq_class(P.rhs, *P.at(c));
    xs[c].canonicalize();
    if (xs[c] < 0) return std::nullopt;
  }
  std::vector<mpq_class> x(n, 0);
  for (std::size_t c = 0; c < S; ++c)
    if (support[c] < n) x[support[c]] = xs[c];
  for (const auto& r : rows) {
    mpq_class lhs = 0;
    for (const auto& [j, a] : r.coefs) lhs += a * x[j];
    if (!holds(r.rel, lhs, r.rhs)) return std::nullopt;
  }
  return x;
}

// y with yᵀA ≤ 0 on every column, slack columns included, and yᵀb > 0.
bool certify_farkas(const std::vector<LinearRow>& rows, std::uint32_t n, const std::vector<double>& dual) {
  constexpr long kMaxDen = 1'000'000;
  std::vector<mpq_class> acc(n, 0);
  mpq_class yb = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    mpq_class y = rationalize(dual[i], kMaxDen);
    if (y == 0) continue;
    if (rows[i].rel == Rel::Ge && y < 0) return false;
    if (rows[i].rel == Rel::Le && y > 0) return false;
    for (const auto& [j, a] : rows[i].coefs) acc[j] += y * a;
    yb += y * rows[i].rhs;
  }
  if (yb <= 0) return false;
  for (const auto& v : acc)
    if (v > 0) return false;
  return true;
}

}  // namespace

void LinearSystem::add_row(LinearRow row) {
  canonicalize(row.coefs);
  for (const auto& e : row.coefs)
    if (e.first >= nvars_) throw InternalError("linear row column out of range");
  rows_.push_back(std::move(row));
}

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Feasible:
      return "feasible";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::ResourceExceeded:
      return "resource-exceeded";
  }
  return "?";
}

std::string dump_linear_system(const LinearSystem& sys) {
  std::string out = "lp vars " + std::to_string(sys.num_vars()) + " rows " + std::to_string(sys.size()) + "\n";
  auto name = [&](std::uint32_t j) {
    return j < sys.names.size() && !sys.names[j].empty() ? sys.names[j] : "v" + std::to_string(j);
  };
  for (const auto& r : sys.rows()) {
    bool first = true;
    for (const auto& [j, a] : r.coefs) {
      if (!first) out += ' ';
      first = false;
      out += (a > 0 ? "+" : "") + a.get_str() + " " + name(j);
    }
    if (first) out += '0';
    out += r.rel == Rel::Eq ? " = " : r.rel == Rel::Ge ? " >= " : " <= ";
    out += r.rhs.get_str() + "\n";
  }
  return out;
}

bool satisfies(const LinearSystem& sys, const std::vector<mpq_class>& point) {
  if (point.size() != sys.num_vars()) return false;
  for (const auto& q : point)
    if (q < 0) return false;
  for (const auto& r : sys.rows()) {
    mpq_class s = 0;
    for (const auto& [j, a] : r.coefs) s += mpq_class(a) * point[j];
    if (!holds(r.rel, s, mpq_class(r.rhs))) return false;
  }
  return true;
}

LpResult lp_feasible(const LinearSystem& sys, const LpOptions& opt) {
  LpResult res;
  res.stats.rows_in = sys.size();
  res.stats.cols_in = sys.num_vars();
  std::vector<LinearRow> rows;
  std::vector<std::uint32_t> cols;
  std::unique_ptr<Presolver> pre;
  if (opt.presolve) {
    pre = std::make_unique<Presolver>(sys);
    pre->run(opt.known_zero);
    if (pre->infeasible) {
      res.status = LpStatus::Infeasible;
      res.note = "presolve";
      return res;
    }
    rows = pre->take_rows(cols);
  } else {
    rows = sys.rows();
    for (std::uint32_t j = 0; j < sys.num_vars(); ++j) cols.push_back(j);
    if (opt.known_zero)
      for (std::uint32_t j = 0; j < sys.num_vars(); ++j)
        if ((*opt.known_zero)[j]) {
          LinearRow z;
          z.coefs.emplace_back(j, 1);
          rows.push_back(std::move(z));
        }
  }
  res.stats.rows_solved = rows.size();
  res.stats.cols_solved = cols.size();
  if (cols.size() > opt.max_columns) {
    res.status = LpStatus::ResourceExceeded;
    res.note = "column limit after presolve";
    return res;
  }
  if (opt.float_guide && rows.size() >= kGuideMinRows) {
    const std::uint32_t nc = static_cast<std::uint32_t>(cols.size());
    Guide g = float_guide(rows, nc, opt.max_pivots, kGuideMaxCells);
    res.stats.pivots += g.pivots;
    std::optional<std::vector<mpq_class>> pt;
    if (g.kind == Guide::Kind::Feasible) pt = certify_support(rows, nc, g.support);
    if (pt) {
      res.status = LpStatus::Feasible;
      res.point.assign(sys.num_vars(), 0);
      for (std::size_t c = 0; c < cols.size(); ++c) res.point[cols[c]] = (*pt)[c];
      if (pre) pre->finish(res.point);
      if (!satisfies(sys, res.point)) throw InternalError("LP point fails the original system");
      return res;
    }
    if (g.kind == Guide::Kind::Infeasible && certify_farkas(rows, nc, g.dual)) {
      res.status = LpStatus::Infeasible;
      res.note = "Farkas certificate";
      return res;
    }
  }
  LpResult core = simplex(rows, cols.size(), opt);
  res.stats.pivots += core.stats.pivots;
  res.status = core.status;
  res.note = core.note;
  if (core.status != LpStatus::Feasible) return res;
  res.point.assign(sys.num_vars(), 0);
  for (std::size_t c = 0; c < cols.size(); ++c) res.point[cols[c]] = core.point[c];
  if (pre) pre->finish(res.point);
  if (!satisfies(sys, res.point)) throw InternalError("LP point fails the original system");
  return res;
}

}  // namespace gc2
