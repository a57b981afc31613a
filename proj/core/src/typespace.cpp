#include "gc2/typespace.hpp"

#include <algorithm>

namespace gc2 {

const char* class_name(TypeClass c) {
  switch (c) {
    case TypeClass::Invertible:
      return "invertible-message";
    case TypeClass::Message:
      return "noninvertible-message";
    case TypeClass::ReverseOnly:
      return "reverse-only";
    case TypeClass::Silent:
      return "silent";
  }
  return "?";
}

VectorRange::VectorRange(std::vector<std::uint64_t> bounds) : bounds_(std::move(bounds)) {
  stride_.assign(bounds_.size(), 1);
  size_ = 1;
  for (std::size_t i = bounds_.size(); i-- > 0;) {
    stride_[i] = size_;
    size_ *= bounds_[i] + 1;
  }
}

std::uint64_t VectorRange::encode(const CountVector& u) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < bounds_.size(); ++i) idx += u[i] * stride_[i];
  return idx;
}

CountVector VectorRange::decode(std::uint64_t idx) const {
  CountVector u(bounds_.size());
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    u[i] = idx / stride_[i];
    idx %= stride_[i];
  }
  return u;
}

bool VectorRange::contains(const CountVector& u) const {
  if (u.size() != bounds_.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > bounds_[i]) return false;
  return true;
}

std::string render_vector(const CountVector& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(u[i]);
  }
  return s + ")";
}

BitString BitString::from_node(std::uint64_t node) {
  unsigned len = 0;
  while (((std::uint64_t{2} << len) - 1) <= node) ++len;
  return {len, node - ((std::uint64_t{1} << len) - 1)};
}

std::string BitString::str() const {
  std::string s(len, '0');
  for (unsigned i = 0; i < len; ++i)
    if ((bits >> (len - 1 - i)) & 1u) s[i] = '1';
  return s;
}

// ---------------------------------------------------------------------------

CompiledQf::CompiledQf(const Formula& f, const Signature& sig) {
  emit(f, sig);
  std::size_t d = 0;
  for (const auto& ins : code_) {
    switch (ins.k) {
      case K::Not:
        break;
      case K::And:
      case K::Or:
      case K::Imp:
      case K::Iff:
        d -= ins.arg - 1;
        break;
      default:
        depth_ = std::max(depth_, ++d);
    }
  }
}

void CompiledQf::emit(const Formula& f, const Signature& sig) {
  const unsigned p = static_cast<unsigned>(sig.size());
  const unsigned nu = static_cast<unsigned>(sig.unary.size());
  switch (f.op) {
    case Op::True:
      code_.push_back({K::True, 0});
      return;
    case Op::False:
      code_.push_back({K::False, 0});
      return;
    case Op::Atom: {
      if (f.args.size() == 1) {
        int u = sig.unary_index(f.pred);
        if (u < 0) throw InvalidInput("unknown unary predicate " + f.pred);
        code_.push_back({f.args[0] == Var::x ? K::Bit1 : K::Bit2, p - 1 - static_cast<unsigned>(u)});
        return;
      }
      int r = sig.binary_index(f.pred);
      if (r < 0 || f.args.size() != 2) throw InvalidInput("bad binary atom " + render(f));
      Var a = f.args[0], b = f.args[1];
      if (a == b)
        code_.push_back({a == Var::x ? K::Bit1 : K::Bit2, p - 1 - (nu + static_cast<unsigned>(r))});
      else
        code_.push_back({a == Var::x ? K::Fwd : K::Rev, static_cast<std::uint32_t>(r)});
      return;
    }
    case Op::Not:
      emit(*f.kids[0], sig);
      code_.push_back({K::Not, 1});
      return;
    case Op::And:
    case Op::Or:
    case Op::Imp:
    case Op::Iff:
      for (const auto& k : f.kids) emit(*k, sig);
      code_.push_back({f.op == Op::And   ? K::And
                       : f.op == Op::Or  ? K::Or
                       : f.op == Op::Imp ? K::Imp
                                         : K::Iff,
                       static_cast<std::uint32_t>(f.kids.size())});
      return;
    default:
      throw InvalidInput("not a quantifier-free equality-free formula: " + render(f));
  }
}

bool CompiledQf::eval(const TwoType& t) const {
  thread_local std::vector<char> stack;
  if (stack.size() < depth_ + 1) stack.resize(depth_ + 1);
  char* st = stack.data();
  std::size_t sp = 0;
  auto push = [&](bool v) { st[sp++] = v; };
  auto at = [&](std::size_t i) -> bool { return st[i] != 0; };
  auto set = [&](std::size_t i, bool v) { st[i] = v; };
  for (const auto& ins : code_) {
    switch (ins.k) {
      case K::True:
        push(true);
        break;
      case K::False:
        push(false);
        break;
      case K::Bit1:
        push((t.pi1 >> ins.arg) & 1u);
        break;
      case K::Bit2:
        push((t.pi2 >> ins.arg) & 1u);
        break;
      case K::Fwd:
        push((t.cross.fwd >> ins.arg) & 1u);
        break;
      case K::Rev:
        push((t.cross.rev >> ins.arg) & 1u);
        break;
      case K::Not:
        set(sp - 1, !at(sp - 1));
        break;
      case K::And: {
        bool v = true;
        for (std::uint32_t i = 0; i < ins.arg; ++i) v = v && at(sp - 1 - i);
        sp -= ins.arg;
        push(v);
        break;
      }
      case K::Or: {
        bool v = false;
        for (std::uint32_t i = 0; i < ins.arg; ++i) v = v || at(sp - 1 - i);
        sp -= ins.arg;
        push(v);
        break;
      }
      case K::Imp: {
        bool b = at(sp - 1), a = at(sp - 2);
        sp -= 2;
        push(!a || b);
        break;
      }
      case K::Iff: {
        bool b = at(sp - 1), a = at(sp - 2);
        sp -= 2;
        push(a == b);
        break;
      }
    }
  }
  return code_.empty() ? true : at(0);
}

// ---------------------------------------------------------------------------

TypeSpace::TypeSpace(const NormalFormProblem& prob, const Caps& caps) : prob_(prob) {
  prob_.check();
  const Signature& sig = prob_.sig;
  if (sig.size() > caps.max_signature)
    throw CapExceeded("signature size " + std::to_string(sig.size()) + " exceeds cap " +
                      std::to_string(caps.max_signature));
  p_ = static_cast<unsigned>(sig.size());
  k_ = static_cast<unsigned>(sig.binary.size());
  nunary_ = static_cast<unsigned>(sig.unary.size());
  if (p_ > 30 || k_ > 13) throw CapExceeded("signature too large for packed types");
  P_ = std::uint32_t{1} << p_;
  for (const auto& c : sig.counting) {
    unsigned b = static_cast<unsigned>(sig.binary_index(c.pred));
    counting_.push_back(b);
    cmask_ |= 1u << b;
  }
  const unsigned m = static_cast<unsigned>(counting_.size());
  q_ = p_ + 2 * k_ - m;

  // Every family has at least P·(vector range) or P·Q members; refuse early.
  mpz_class U = 1, C = prob_.max_bound();
  std::vector<std::uint64_t> bounds;
  for (const auto& c : sig.counting) {
    U *= c.bound + 1;
    if (U * P_ > caps.max_vars) throw CapExceeded("count vector range exceeds the variable cap");
    bounds.push_back(c.bound.get_ui());
  }
  range_ = VectorRange(bounds);
  mpz_class D = C * 3 * m;
  if (!D.fits_ulong_p()) throw CapExceeded("threshold 3mC too large");
  D_ = D.get_ui();

  mpz_class Qz = mpz_class(1) << q_;
  mpz_class invz = mpz_class(((1u << m) - 1) * ((1u << m) - 1)) * (mpz_class(1) << (2 * (k_ - m)));
  if (Qz * P_ > caps.max_vars || invz * P_ * P_ > caps.max_vars)
    throw CapExceeded("type families exceed the variable cap");
  Q_ = Qz.get_ui();
  R_ = static_cast<std::uint64_t>(P_) * ((std::uint64_t{1} << m) - 1) * (std::uint64_t{1} << (2 * (k_ - m)));

  alpha_ = CompiledQf(*prob_.alpha, sig);
  for (const auto& g : prob_.guards)
    guards_.emplace_back(static_cast<unsigned>(sig.binary_index(g.pred)), CompiledQf(*g.beta, sig));

  const std::uint32_t words = std::uint32_t{1} << (2 * k_);
  pos_.assign(words, 0);
  for (std::uint32_t w = 0; w < words; ++w) {
    Cross c;
    for (unsigned j = 0; j < k_; ++j) {
      unsigned shift = 2 * (k_ - 1 - j);
      if ((w >> (shift + 1)) & 1u) c.fwd |= 1u << j;
      if ((w >> shift) & 1u) c.rev |= 1u << j;
    }
    bool f = c.fwd & cmask_, r = c.rev & cmask_;
    std::vector<Cross>* list = f && r ? &inv_ : f ? &msg_ : !r ? &sil_ : nullptr;
    if (!list) continue;
    pos_[w] = static_cast<std::uint32_t>(list->size());
    list->push_back(c);
  }
}

std::uint32_t TypeSpace::cross_word(const Cross& c) const {
  std::uint32_t w = 0;
  for (unsigned j = 0; j < k_; ++j) w = (w << 2) | (((c.fwd >> j) & 1u) << 1) | ((c.rev >> j) & 1u);
  return w;
}

TypeClass TypeSpace::classify(const TwoType& t) const {
  bool f = t.cross.fwd & cmask_, r = t.cross.rev & cmask_;
  if (f && r) return TypeClass::Invertible;
  if (f) return TypeClass::Message;
  if (r) return TypeClass::ReverseOnly;
  return TypeClass::Silent;
}

CountVector TypeSpace::c_vector(const TwoType& t) const {
  CountVector u(counting_.size());
  for (std::size_t i = 0; i < counting_.size(); ++i) u[i] = (t.cross.fwd >> counting_[i]) & 1u;
  return u;
}

bool TypeSpace::alpha_holds(OneType pi) const { return alpha_.eval({pi, pi, {0, 0}}); }

bool TypeSpace::universal_holds(const TwoType& t) const {
  for (const auto& [e, beta] : guards_)
    if (((t.cross.fwd >> e) & 1u) && !beta.eval(t)) return false;
  return true;
}

bool TypeSpace::is_forbidden(const TwoType& t) const {
  return !(alpha_holds(t.pi1) && alpha_holds(t.pi2) && universal_holds(t) && universal_holds(invert(t)));
}

TwoType TypeSpace::m_entry(OneType pi, std::uint64_t j) const {
  if (j < R_) return {pi, static_cast<OneType>(j / msg_.size()), msg_[j % msg_.size()]};
  j -= R_;
  return {pi, static_cast<OneType>(j / sil_.size()), sil_[j % sil_.size()]};
}

std::int64_t TypeSpace::m_index(const TwoType& t) const {
  switch (classify(t)) {
    case TypeClass::Message:
      return static_cast<std::int64_t>(t.pi2 * msg_.size() + pos_[cross_word(t.cross)]);
    case TypeClass::Silent:
      return static_cast<std::int64_t>(R_ + t.pi2 * sil_.size() + pos_[cross_word(t.cross)]);
    default:
      return -1;
  }
}

TwoType TypeSpace::lambda_entry(OneType pi, std::uint64_t j) const {
  return {pi, static_cast<OneType>(j / inv_.size()), inv_[j % inv_.size()]};
}

std::int64_t TypeSpace::lambda_index(const TwoType& t) const {
  if (classify(t) != TypeClass::Invertible) return -1;
  return static_cast<std::int64_t>(t.pi2 * inv_.size() + pos_[cross_word(t.cross)]);
}

}  // namespace gc2
