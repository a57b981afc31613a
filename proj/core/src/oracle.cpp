#include <algorithm>

#include "gc2/structure.hpp"

namespace gc2 {

namespace {

class NormalFormSearch {
 public:
  explicit NormalFormSearch(const TypeSpace& ts) : ts_(ts) {
    const auto& prob = ts.problem();
    const unsigned nu = static_cast<unsigned>(prob.sig.unary.size());
    OneType padmask = 0;
    for (unsigned j = nu - static_cast<unsigned>(prob.padding); j < nu; ++j) padmask |= 1u << ts.bit_of(j);
    // Padding predicates occur nowhere in the problem, so one representative suffices.
    for (OneType pi = 0; pi < ts.P(); ++pi)
      if (!(pi & padmask) && ts.alpha_holds(pi)) types_.push_back(pi);
    for (const auto& c : prob.sig.counting) bound_.push_back(c.bound.get_ui());
    const std::uint32_t cm = ts.counting_mask();
    const std::size_t T = types_.size();
    choices_.assign(T * T, {});
    for (std::size_t i = 0; i < T; ++i)
      for (std::size_t j = 0; j < T; ++j) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (const Cross& c : all_crosses()) {
          TwoType t{types_[i], types_[j], c};
          if (ts.is_forbidden(t)) continue;
          // Crosses with equal counting projection are interchangeable for the search.
          std::pair<std::uint32_t, std::uint32_t> key{c.fwd & cm, c.rev & cm};
          if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
          seen.push_back(key);
          choices_[i * T + j].push_back(c);
        }
      }
  }

  std::optional<Structure> run(Element max_n) {
    std::uint64_t cmax = *std::max_element(bound_.begin(), bound_.end());
    for (Element n = 1; n <= max_n; ++n) {
      if (n - 1 < cmax) continue;
      n_ = n;
      seq_.assign(n, 0);
      if (types_.empty()) return std::nullopt;
      if (sequences(0, 0)) return build();
    }
    return std::nullopt;
  }

 private:
  std::vector<Cross> all_crosses() const {
    std::vector<Cross> v;
    const unsigned k = ts_.k();
    for (std::uint32_t f = 0; f < (1u << k); ++f)
      for (std::uint32_t r = 0; r < (1u << k); ++r) v.push_back({f, r});
    return v;
  }

  bool sequences(Element pos, std::size_t from) {
    if (pos == n_) return pairs_start();
    for (std::size_t t = from; t < types_.size(); ++t) {
      bool ok = true;
      for (Element e = 0; e < pos && ok; ++e) ok = !choices_[seq_[e] * types_.size() + t].empty();
      if (!ok) continue;
      seq_[pos] = t;
      if (sequences(pos + 1, t)) return true;
    }
    return false;
  }

  bool pairs_start() {
    const std::size_t m = bound_.size();
    cnt_.assign(static_cast<std::size_t>(n_) * m, 0);
    remaining_.assign(n_, n_ - 1);
    pick_.assign(static_cast<std::size_t>(n_) * n_, {});
    pairs_.clear();
    for (Element a = 0; a < n_; ++a)
      for (Element b = a + 1; b < n_; ++b) pairs_.emplace_back(a, b);
    return pairs(0);
  }

  bool viable(Element e) const {
    for (std::size_t i = 0; i < bound_.size(); ++i) {
      std::uint64_t c = cnt_[e * bound_.size() + i];
      if (c > bound_[i] || c + remaining_[e] < bound_[i]) return false;
    }
    return true;
  }

  bool pairs(std::size_t k) {
    if (k == pairs_.size()) return true;
    auto [a, b] = pairs_[k];
    const auto& ch = choices_[seq_[a] * types_.size() + seq_[b]];
    const auto& cnt = ts_.counting();
    const std::size_t m = bound_.size();
    --remaining_[a];
    --remaining_[b];
    for (const Cross& c : ch) {
      for (std::size_t i = 0; i < m; ++i) {
        cnt_[a * m + i] += (c.fwd >> cnt[i]) & 1u;
        cnt_[b * m + i] += (c.rev >> cnt[i]) & 1u;
      }
      if (viable(a) && viable(b)) {
        pick_[a * n_ + b] = c;
        if (pairs(k + 1)) return true;
      }
      for (std::size_t i = 0; i < m; ++i) {
        cnt_[a * m + i] -= (c.fwd >> cnt[i]) & 1u;
        cnt_[b * m + i] -= (c.rev >> cnt[i]) & 1u;
      }
    }
    ++remaining_[a];
    ++remaining_[b];
    return false;
  }

  Structure build() const {
    const Signature& sig = ts_.problem().sig;
    Structure st(sig, n_);
    const unsigned nu = static_cast<unsigned>(sig.unary.size());
    for (Element a = 0; a < n_; ++a) {
      OneType pi = types_[seq_[a]];
      for (unsigned j = 0; j < nu; ++j)
        if (ts_.unary_holds(pi, j)) st.set_unary(j, a);
      for (unsigned r = 0; r < ts_.k(); ++r)
        if (ts_.self_holds(pi, r)) st.add_edge(r, a, a);
    }
    for (auto [a, b] : pairs_) {
      const Cross& c = pick_[a * n_ + b];
      for (unsigned r = 0; r < ts_.k(); ++r) {
        if ((c.fwd >> r) & 1u) st.add_edge(r, a, b);
        if ((c.rev >> r) & 1u) st.add_edge(r, b, a);
      }
    }
    return st;
  }

  const TypeSpace& ts_;
  std::vector<OneType> types_;
  std::vector<std::uint64_t> bound_;
  std::vector<std::vector<Cross>> choices_;
  Element n_ = 0;
  std::vector<std::size_t> seq_;
  std::vector<std::uint64_t> cnt_;
  std::vector<std::uint64_t> remaining_;
  std::vector<Cross> pick_;
  std::vector<std::pair<Element, Element>> pairs_;
};

}  // namespace

std::optional<Structure> oracle_finsat(const TypeSpace& ts, Element max_n) {
  return NormalFormSearch(ts).run(max_n);
}

std::optional<Structure> oracle_formula(const Signature& sig, const Formula& f, Element max_n, unsigned max_bits) {
  for (Element n = 1; n <= max_n; ++n) {
    const std::size_t nn = sig.nullary.size(), nu = sig.unary.size(), nb = sig.binary.size();
    const std::uint64_t bits = nn + static_cast<std::uint64_t>(n) * nu + static_cast<std::uint64_t>(n) * n * nb;
    if (bits > max_bits)
      throw CapExceeded("formula oracle needs " + std::to_string(bits) + " bits at domain size " +
                        std::to_string(n));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      Structure st(sig, n);
      std::uint64_t b = 0;
      for (std::size_t k = 0; k < nn; ++k) st.set_nullary(k, (mask >> b++) & 1u);
      for (std::size_t u = 0; u < nu; ++u)
        for (Element a = 0; a < n; ++a)
          if ((mask >> b++) & 1u) st.set_unary(u, a);
      for (std::size_t r = 0; r < nb; ++r)
        for (Element a = 0; a < n; ++a)
          for (Element c = 0; c < n; ++c)
            if ((mask >> b++) & 1u) st.add_edge(r, a, c);
      if (evaluate(f, st)) return st;
    }
  }
  return std::nullopt;
}

}  // namespace gc2
