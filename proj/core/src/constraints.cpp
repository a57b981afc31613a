#include "gc2/constraints.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace gc2 {

const char* family_name(Family f) {
  switch (f) {
    case Family::X:
      return "x";
    case Family::Y:
      return "y";
    case Family::Z:
      return "z";
    case Family::YH:
      return "yh";
    case Family::ZH:
      return "zh";
  }
  return "?";
}

Layout Layout::of(const TypeSpace& ts) {
  Layout l;
  l.p = ts.p();
  l.k = ts.k();
  l.counting = ts.counting();
  l.bounds = ts.range().bounds();
  return l;
}

VarSpace::VarSpace(Layout layout, std::uint64_t max_vars) : layout_(std::move(layout)) {
  const unsigned m = static_cast<unsigned>(layout_.counting.size());
  if (m == 0 || layout_.bounds.size() != m) throw InvalidInput("layout needs m >= 1 bounds");
  if (layout_.p > 30 || layout_.k > 13 || 2 * layout_.k < m) throw CapExceeded("layout too large");
  q_ = layout_.p + 2 * layout_.k - m;
  if (q_ > 40) throw CapExceeded("layout too large");
  P_ = std::uint32_t{1} << layout_.p;
  std::uint32_t cmask = 0;
  for (unsigned c : layout_.counting) cmask |= 1u << c;
  const std::uint32_t words = std::uint32_t{1} << (2 * layout_.k);
  inv_pos_.assign(words, 0);
  for (std::uint32_t w = 0; w < words; ++w) {
    Cross c;
    for (unsigned j = 0; j < layout_.k; ++j) {
      unsigned shift = 2 * (layout_.k - 1 - j);
      if ((w >> (shift + 1)) & 1u) c.fwd |= 1u << j;
      if ((w >> shift) & 1u) c.rev |= 1u << j;
    }
    if ((c.fwd & cmask) && (c.rev & cmask)) {
      inv_pos_[w] = static_cast<std::uint32_t>(inv_.size());
      inv_.push_back(c);
    }
  }
  mpz_class U = 1;
  for (auto b : layout_.bounds) U *= mpz_class(static_cast<unsigned long>(b)) + 1;
  mpz_class P = P_;
  mpz_class yn = (mpz_class(2) << layout_.p) - 1, zn = (mpz_class(2) << q_) - 1;
  mpz_class counts[5] = {P * P * static_cast<unsigned long>(inv_.size()), P * yn * U, P * zn * U,
                         P * ((yn - 1) / 2) * U * U, P * ((zn - 1) / 2) * U * U};
  mpz_class total = 0;
  for (auto& c : counts) total += c;
  if (total > max_vars || total > mpz_class(std::to_string(UINT32_MAX)))
    throw CapExceeded("variable count " + total.get_str() + " exceeds cap " + std::to_string(max_vars));
  range_ = VectorRange(layout_.bounds);
  std::uint64_t off = 0;
  for (int i = 0; i < 5; ++i) {
    count_[i] = counts[i].get_ui();
    off_[i] = off;
    off += count_[i];
  }
  total_ = off;
}

VarIndex VarSpace::index(const VarId& id) const {
  switch (id.family) {
    case Family::X:
      return x(id.pi, id.lambda);
    case Family::Y:
      return y(id.pi, id.node, id.u);
    case Family::Z:
      return z(id.pi, id.node, id.u);
    case Family::YH:
      return yh(id.pi, id.node, id.v, id.w);
    case Family::ZH:
      return zh(id.pi, id.node, id.v, id.w);
  }
  return 0;
}

VarId VarSpace::decode(VarIndex idx) const {
  VarId id;
  int f = 4;
  while (f > 0 && idx < off_[f]) --f;
  id.family = static_cast<Family>(f);
  std::uint64_t r = idx - off_[f];
  const std::uint64_t u = U();
  switch (id.family) {
    case Family::X:
      id.pi = static_cast<OneType>(r / (static_cast<std::uint64_t>(P_) * inv_.size()));
      id.lambda = r % (static_cast<std::uint64_t>(P_) * inv_.size());
      break;
    case Family::Y:
    case Family::Z: {
      std::uint64_t nodes = id.family == Family::Y ? y_nodes() : z_nodes();
      id.u = r % u;
      r /= u;
      id.node = r % nodes;
      id.pi = static_cast<OneType>(r / nodes);
      break;
    }
    case Family::YH:
    case Family::ZH: {
      std::uint64_t nodes = ((id.family == Family::YH ? y_nodes() : z_nodes()) - 1) / 2;
      id.w = r % u;
      r /= u;
      id.v = r % u;
      r /= u;
      id.node = r % nodes;
      id.pi = static_cast<OneType>(r / nodes);
      break;
    }
  }
  return id;
}

namespace {

std::string bits_of(std::uint32_t word, unsigned k) {
  std::string s(k, '0');
  for (unsigned j = 0; j < k; ++j)
    if ((word >> j) & 1u) s[j] = '1';
  return s;
}

}  // namespace

std::string VarSpace::name(VarIndex idx) const {
  VarId id = decode(idx);
  std::string s = family_name(id.family);
  s += "[pi=" + std::to_string(id.pi);
  switch (id.family) {
    case Family::X: {
      std::uint64_t to = id.lambda / inv_.size();
      const Cross& c = inv_[id.lambda % inv_.size()];
      s += ",to=" + std::to_string(to) + ",fwd=" + bits_of(c.fwd, layout_.k) + ",rev=" + bits_of(c.rev, layout_.k);
      break;
    }
    case Family::Y:
    case Family::Z:
      s += std::string(id.family == Family::Y ? ",s=" : ",t=") + BitString::from_node(id.node).str() +
           ",u=" + render_vector(range_.decode(id.u));
      break;
    case Family::YH:
    case Family::ZH:
      s += std::string(id.family == Family::YH ? ",s=" : ",t=") + BitString::from_node(id.node).str() +
           ",v=" + render_vector(range_.decode(id.v)) + ",w=" + render_vector(range_.decode(id.w));
      break;
  }
  return s + "]";
}

VarIndex VarSpace::parse_name(std::string_view text) const {
  auto bad = [&]() -> InvalidInput { return InvalidInput("malformed variable '" + std::string(text) + "'"); };
  std::size_t lb = text.find('[');
  if (lb == std::string_view::npos || text.back() != ']') throw bad();
  std::string fam(text.substr(0, lb));
  std::map<std::string, std::string> kv;
  std::string_view body = text.substr(lb + 1, text.size() - lb - 2);
  std::size_t i = 0;
  while (i < body.size()) {
    std::size_t eq = body.find('=', i);
    if (eq == std::string_view::npos) throw bad();
    std::string key(body.substr(i, eq - i));
    std::size_t j = eq + 1;
    int depth = 0;
    while (j < body.size() && (depth > 0 || body[j] != ',')) {
      if (body[j] == '(') ++depth;
      if (body[j] == ')') --depth;
      ++j;
    }
    kv[key] = std::string(body.substr(eq + 1, j - eq - 1));
    i = j + 1;
  }
  auto num = [&](const std::string& key) -> std::uint64_t {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.empty() ||
        !std::all_of(it->second.begin(), it->second.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw bad();
    return std::stoull(it->second);
  };
  auto bits = [&](const std::string& key, std::uint64_t maxlen) -> std::uint64_t {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.size() > maxlen) throw bad();
    BitString b;
    for (char c : it->second) {
      if (c != '0' && c != '1') throw bad();
      b = b.child(c == '1');
    }
    return b.node();
  };
  auto vec = [&](const std::string& key) -> std::uint64_t {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.size() < 2 || it->second.front() != '(' || it->second.back() != ')')
      throw bad();
    CountVector u;
    std::stringstream ss(it->second.substr(1, it->second.size() - 2));
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw bad();
      u.push_back(std::stoull(part));
    }
    if (!range_.contains(u)) throw bad();
    return range_.encode(u);
  };
  std::uint64_t pi = num("pi");
  if (pi >= P_) throw bad();
  VarId id;
  id.pi = static_cast<OneType>(pi);
  if (fam == "x") {
    std::uint64_t to = num("to");
    auto fw = kv.find("fwd"), rv = kv.find("rev");
    if (to >= P_ || fw == kv.end() || rv == kv.end() || fw->second.size() != layout_.k ||
        rv->second.size() != layout_.k)
      throw bad();
    Cross c;
    for (unsigned j = 0; j < layout_.k; ++j) {
      if (fw->second[j] == '1') c.fwd |= 1u << j;
      if (rv->second[j] == '1') c.rev |= 1u << j;
    }
    auto it = std::find(inv_.begin(), inv_.end(), c);
    if (it == inv_.end()) throw bad();
    id.family = Family::X;
    id.lambda = to * inv_.size() + static_cast<std::uint64_t>(it - inv_.begin());
  } else if (fam == "y" || fam == "z") {
    id.family = fam == "y" ? Family::Y : Family::Z;
    id.node = bits(fam == "y" ? "s" : "t", fam == "y" ? layout_.p : q_);
    id.u = vec("u");
  } else if (fam == "yh" || fam == "zh") {
    id.family = fam == "yh" ? Family::YH : Family::ZH;
    id.node = bits(fam == "yh" ? "s" : "t", (fam == "yh" ? layout_.p : q_) - 1);
    id.v = vec("v");
    id.w = vec("w");
  } else {
    throw bad();
  }
  return index(id);
}

// ---------------------------------------------------------------------------

ConstraintSet::ConstraintSet(std::shared_ptr<const VarSpace> space)
    : space_(std::move(space)), nvars_(space_->size()) {}

ConstraintSet::ConstraintSet(std::uint64_t num_vars) : nvars_(num_vars) {}

std::size_t ConstraintSet::count(Kind k) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
}

void ConstraintSet::push(Kind k, VarIndex target, std::span<const VarIndex> terms, std::uint64_t th) {
  if (target >= nvars_) throw InternalError("constraint target out of range");
  for (VarIndex v : terms)
    if (v >= nvars_) throw InternalError("constraint term out of range");
  kinds_.push_back(k);
  targets_.push_back(target);
  thresholds_.push_back(th);
  terms_.insert(terms_.end(), terms.begin(), terms.end());
  offsets_.push_back(terms_.size());
}

void ConstraintSet::add_sum_eq(VarIndex target, std::span<const VarIndex> terms) {
  push(Kind::SumEq, target, terms, 0);
}
void ConstraintSet::add_ge1(std::span<const VarIndex> terms) { push(Kind::SumGe1, 0, terms, 0); }
void ConstraintSet::add_zero(VarIndex v) { push(Kind::Zero, v, {}, 0); }
void ConstraintSet::add_cond(VarIndex antecedent, std::span<const VarIndex> terms, std::uint64_t threshold) {
  push(Kind::Cond, antecedent, terms, threshold);
}

std::string ConstraintSet::var_name(VarIndex v) const {
  return space_ ? space_->name(v) : "v" + std::to_string(v);
}

bool ConstraintSet::operator==(const ConstraintSet& o) const {
  if (nvars_ != o.nvars_ || kinds_ != o.kinds_ || targets_ != o.targets_ || thresholds_ != o.thresholds_ ||
      offsets_ != o.offsets_ || terms_ != o.terms_)
    return false;
  if (!space_ || !o.space_) return !space_ && !o.space_;
  return space_->layout() == o.space_->layout();
}

std::shared_ptr<const VarSpace> build_variable_space(const TypeSpace& ts, const Caps& caps) {
  return std::make_shared<const VarSpace>(Layout::of(ts), caps.max_vars);
}

// ---------------------------------------------------------------------------

ConstraintSet generate_E(const TypeSpace& ts, const Caps& caps) {
  auto vs = build_variable_space(ts, caps);
  ConstraintSet cs(vs);
  cs.hash = problem_hash(ts.problem());
  const VectorRange& R = vs->range();
  const std::uint64_t U = R.size();
  const std::uint32_t P = ts.P();
  const unsigned p = ts.p(), q = ts.q();
  const std::uint64_t ninv = vs->num_inv();

  // v + w = u and v + w ≤ C tables over vector indices.
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> split(U);
  std::vector<std::vector<std::uint64_t>> fits(U);
  std::vector<std::uint64_t> complement(U);
  {
    std::vector<CountVector> dec(U);
    for (std::uint64_t i = 0; i < U; ++i) dec[i] = R.decode(i);
    const auto& C = R.bounds();
    for (std::uint64_t v = 0; v < U; ++v) {
      CountVector c(C.size());
      for (std::size_t d = 0; d < C.size(); ++d) c[d] = C[d] - dec[v][d];
      complement[v] = R.encode(c);
      for (std::uint64_t w = 0; w < U; ++w) {
        CountVector s(C.size());
        bool ok = true;
        for (std::size_t d = 0; d < C.size(); ++d) {
          s[d] = dec[v][d] + dec[w][d];
          ok = ok && s[d] <= C[d];
        }
        if (!ok) continue;
        fits[v].push_back(w);
        split[R.encode(s)].emplace_back(v, w);
      }
    }
  }

  std::vector<VarIndex> terms;
  const std::uint64_t y_internal = (std::uint64_t{1} << p) - 1;
  const std::uint64_t z_internal = (std::uint64_t{1} << q) - 1;

  // E1
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t u = 0; u < U; ++u) {
      VarIndex t = vs->y(pi, 0, complement[u]);
      cs.add_sum_eq(vs->z(pi, 0, u), {&t, 1});
    }
  auto sum_rows = [&](bool ytree) {
    std::uint64_t internal = ytree ? y_internal : z_internal;
    for (OneType pi = 0; pi < P; ++pi)
      for (std::uint64_t n = 0; n < internal; ++n)
        for (std::uint64_t u = 0; u < U; ++u) {
          terms.clear();
          for (auto [v, w] : split[u]) terms.push_back(ytree ? vs->yh(pi, n, v, w) : vs->zh(pi, n, v, w));
          cs.add_sum_eq(ytree ? vs->y(pi, n, u) : vs->z(pi, n, u), terms);
        }
  };
  auto child_rows = [&](bool ytree, unsigned side) {
    std::uint64_t internal = ytree ? y_internal : z_internal;
    for (OneType pi = 0; pi < P; ++pi)
      for (std::uint64_t n = 0; n < internal; ++n) {
        std::uint64_t child = 2 * n + 1 + side;
        for (std::uint64_t a = 0; a < U; ++a) {
          terms.clear();
          for (std::uint64_t b : fits[a]) {
            std::uint64_t v = side == 0 ? a : b, w = side == 0 ? b : a;
            terms.push_back(ytree ? vs->yh(pi, n, v, w) : vs->zh(pi, n, v, w));
          }
          cs.add_sum_eq(ytree ? vs->y(pi, child, a) : vs->z(pi, child, a), terms);
        }
      }
  };
  sum_rows(true);
  sum_rows(false);
  child_rows(true, 0);
  child_rows(true, 1);
  child_rows(false, 0);
  child_rows(false, 1);
  terms.clear();
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t u = 0; u < U; ++u) terms.push_back(vs->y(pi, 0, u));
  cs.add_ge1(terms);

  // E2
  std::vector<std::uint64_t> inv_c(ninv);
  for (std::uint64_t i = 0; i < ninv; ++i) inv_c[i] = ts.c_index({0, 0, vs->invertible_patterns()[i]});
  for (OneType pi = 0; pi < P; ++pi)
    for (OneType leaf = 0; leaf < P; ++leaf) {
      std::uint64_t node = y_internal + leaf;
      for (std::uint64_t u = 1; u < U; ++u) {
        terms.clear();
        for (std::uint64_t i = 0; i < ninv; ++i)
          if (inv_c[i] == u) terms.push_back(vs->x(pi, leaf * ninv + i));
        cs.add_sum_eq(vs->y(pi, node, u), terms);
      }
    }
  const std::uint64_t Q = ts.Q();
  std::vector<CountVector> dec(U);
  for (std::uint64_t i = 0; i < U; ++i) dec[i] = R.decode(i);
  auto multiple = [&](const CountVector& cu, const CountVector& u) {
    std::uint64_t n = 0;
    bool set = false;
    for (std::size_t d = 0; d < u.size(); ++d) {
      if (cu[d] == 0) {
        if (u[d] != 0) return false;
      } else if (!set) {
        n = u[d] / cu[d];
        set = true;
        if (n * cu[d] != u[d]) return false;
      } else if (u[d] != n * cu[d]) {
        return false;
      }
    }
    return set;
  };
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < Q; ++j) {
      CountVector cu = ts.c_vector(ts.m_entry(pi, j));
      for (std::uint64_t u = 1; u < U; ++u)
        if (!multiple(cu, dec[u])) cs.add_zero(vs->z(pi, z_internal + j, u));
    }
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < P * ninv; ++j) {
      TwoType lam = ts.lambda_entry(pi, j);
      TwoType inv = invert(lam);
      VarIndex a = vs->x(pi, j);
      VarIndex b = vs->x(inv.pi1, static_cast<std::uint64_t>(ts.lambda_index(inv)));
      if (a < b) cs.add_sum_eq(b, {&a, 1});
    }
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t i = 0; i < ninv; ++i) cs.add_zero(vs->x(pi, pi * ninv + i));
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < P * ninv; ++j)
      if (ts.is_forbidden(ts.lambda_entry(pi, j))) cs.add_zero(vs->x(pi, j));
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < Q; ++j)
      if (ts.is_forbidden(ts.m_entry(pi, j)))
        for (std::uint64_t u = 1; u < U; ++u) cs.add_zero(vs->z(pi, z_internal + j, u));

  // E3
  for (OneType pi = 0; pi < P; ++pi)
    for (std::uint64_t j = 0; j < Q; ++j) {
      OneType rho = ts.m_entry(pi, j).pi2;
      terms.clear();
      for (std::uint64_t u = 0; u < U; ++u) terms.push_back(vs->y(rho, 0, u));
      for (std::uint64_t u = 1; u < U; ++u) cs.add_cond(vs->z(pi, z_internal + j, u), terms, ts.D());
    }
  return cs;
}

// ---------------------------------------------------------------------------

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void append_terms(std::string& out, const ConstraintSet& cs, std::span<const VarIndex> terms) {
  if (terms.empty()) {
    out += '0';
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    out += cs.var_name(terms[i]);
  }
}

}  // namespace

std::string dump_constraints(const ConstraintSet& cs) {
  std::string out = "gc2-constraints 1\n";
  out += "hash " + hex64(cs.hash) + "\n";
  if (const auto& vs = cs.space()) {
    const Layout& l = vs->layout();
    out += "layout p=" + std::to_string(l.p) + " k=" + std::to_string(l.k) + " counting=";
    for (std::size_t i = 0; i < l.counting.size(); ++i) out += (i ? "," : "") + std::to_string(l.counting[i]);
    out += " C=" + render_vector(l.bounds) + "\n";
    out += "vars " + std::to_string(cs.num_vars());
    for (Family f : {Family::X, Family::Y, Family::Z, Family::YH, Family::ZH})
      out += std::string(" ") + family_name(f) + "=" + std::to_string(vs->family_size(f));
    out += "\n";
  } else {
    out += "vars " + std::to_string(cs.num_vars()) + "\n";
  }
  out += "constraints " + std::to_string(cs.size()) + " sumeq=" + std::to_string(cs.count(Kind::SumEq)) +
         " ge1=" + std::to_string(cs.count(Kind::SumGe1)) + " zero=" + std::to_string(cs.count(Kind::Zero)) +
         " cond=" + std::to_string(cs.count(Kind::Cond)) + "\n";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ConstraintRef c = cs[i];
    switch (c.kind) {
      case Kind::SumEq:
        out += cs.var_name(c.target) + " = ";
        append_terms(out, cs, c.terms);
        break;
      case Kind::SumGe1:
        append_terms(out, cs, c.terms);
        out += " >= 1";
        break;
      case Kind::Zero:
        out += "zero " + cs.var_name(c.target);
        break;
      case Kind::Cond:
        out += cs.var_name(c.target) + " > 0 => ";
        append_terms(out, cs, c.terms);
        out += " >= " + std::to_string(c.threshold);
        break;
    }
    out += '\n';
  }
  return out;
}

ConstraintSet load_constraints(std::string_view text, const Caps& caps) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, lineno, 1); };
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next() || line.rfind("gc2-constraints", 0) != 0) throw fail("missing constraint dump header");
  if (!next() || line.rfind("hash ", 0) != 0) throw fail("missing hash line");
  std::uint64_t hash = std::stoull(line.substr(5), nullptr, 16);
  if (!next()) throw fail("missing vars line");
  std::shared_ptr<const VarSpace> vs;
  if (line.rfind("layout ", 0) == 0) {
    Layout l;
    std::istringstream ls(line.substr(7));
    std::string tok;
    while (ls >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw fail("bad layout token");
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "p") {
        l.p = static_cast<unsigned>(std::stoul(val));
      } else if (key == "k") {
        l.k = static_cast<unsigned>(std::stoul(val));
      } else if (key == "counting") {
        std::stringstream ss(val);
        std::string part;
        while (std::getline(ss, part, ',')) l.counting.push_back(static_cast<unsigned>(std::stoul(part)));
      } else if (key == "C") {
        if (val.size() < 2) throw fail("bad bound vector");
        std::stringstream ss(val.substr(1, val.size() - 2));
        std::string part;
        while (std::getline(ss, part, ',')) l.bounds.push_back(std::stoull(part));
      } else {
        throw fail("unknown layout key " + key);
      }
    }
    try {
      vs = std::make_shared<const VarSpace>(l, caps.max_vars);
    } catch (const InvalidInput& e) {
      throw fail(e.what());
    }
    if (!next()) throw fail("missing vars line");
  }
  if (line.rfind("vars ", 0) != 0) throw fail("missing vars line");
  std::uint64_t nvars = std::stoull(line.substr(5));
  ConstraintSet cs = vs ? ConstraintSet(vs) : ConstraintSet(nvars);
  if (cs.num_vars() != nvars) throw fail("variable count disagrees with layout");
  cs.hash = hash;
  if (!next() || line.rfind("constraints ", 0) != 0) throw fail("missing constraints line");
  std::size_t expected = std::stoull(line.substr(12));

  auto var = [&](const std::string& name) -> VarIndex {
    try {
      if (vs) return vs->parse_name(name);
      if (name.size() < 2 || name[0] != 'v') throw InvalidInput("bad variable");
      std::uint64_t v = std::stoull(name.substr(1));
      if (v >= nvars) throw InvalidInput("bad variable");
      return static_cast<VarIndex>(v);
    } catch (const std::exception&) {
      throw fail("bad variable '" + name + "'");
    }
  };
  auto sum = [&](const std::vector<std::string>& toks, std::size_t from, std::size_t to) {
    std::vector<VarIndex> out;
    if (to == from + 1 && toks[from] == "0") return out;
    for (std::size_t i = from; i < to; ++i) {
      if ((i - from) % 2 == 1) {
        if (toks[i] != "+") throw fail("expected '+'");
      } else {
        out.push_back(var(toks[i]));
      }
    }
    if ((to - from) % 2 == 0) throw fail("dangling '+'");
    return out;
  };
  while (next()) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks[0] == "zero") {
      if (toks.size() != 2) throw fail("bad zero line");
      cs.add_zero(var(toks[1]));
    } else if (toks.size() >= 3 && toks[1] == "=") {
      auto terms = sum(toks, 2, toks.size());
      cs.add_sum_eq(var(toks[0]), terms);
    } else if (toks.size() >= 6 && toks[1] == ">" && toks[2] == "0" && toks[3] == "=>") {
      if (toks[toks.size() - 2] != ">=") throw fail("bad conditional");
      auto terms = sum(toks, 4, toks.size() - 2);
      cs.add_cond(var(toks[0]), terms, std::stoull(toks.back()));
    } else if (toks.size() >= 3 && toks[toks.size() - 2] == ">=" && toks.back() == "1") {
      auto terms = sum(toks, 0, toks.size() - 2);
      cs.add_ge1(terms);
    } else {
      throw fail("unrecognized constraint");
    }
  }
  if (cs.size() != expected) throw fail("constraint count disagrees with header");
  return cs;
}

}  // namespace gc2
