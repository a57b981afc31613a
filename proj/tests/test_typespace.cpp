#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace gc2;

TEST_CASE("P0 counts") {
  TypeSpace ts(test::padded(test::kP0));
  CHECK(ts.P() == 4);
  CHECK(ts.p() == 2);
  CHECK(ts.k() == 1);
  CHECK(ts.R() == 4);
  CHECK(ts.Q() == 8);
  CHECK(ts.q() == 3);
  CHECK(ts.D() == 3);
}

TEST_CASE("with a unary predicate P and Q double") {
  TypeSpace ts(test::padded("unary u\nbinary f\nalpha true\nguard f true\ncount f 1\nend\n"));
  CHECK(ts.P() == 8);
  CHECK(ts.Q() == 16);
}

TEST_CASE("Q = P * 2^(2k - m) is a power of two") {
  for (const auto& p : test::corpus(3, 30, 200'000)) {
    TypeSpace ts(p);
    CHECK(ts.Q() == (std::uint64_t{ts.P()} << (2 * ts.k() - ts.m())));
    CHECK(ts.Q() == (std::uint64_t{1} << ts.q()));
    CHECK(ts.R() <= ts.Q());
  }
}

TEST_CASE("class laws") {
  for (const auto& p : test::corpus(5, 20, 200'000)) {
    TypeSpace ts(p);
    std::size_t total = 0;
    for (std::uint32_t fwd = 0; fwd < (1u << ts.k()); ++fwd)
      for (std::uint32_t rev = 0; rev < (1u << ts.k()); ++rev)
        for (OneType a = 0; a < ts.P(); ++a)
          for (OneType b = 0; b < ts.P(); ++b) {
            TwoType t{a, b, {fwd, rev}};
            TwoType inv = invert(t);
            CHECK(invert(inv) == t);
            CHECK(ts.is_forbidden(t) == ts.is_forbidden(inv));
            TypeClass c = ts.classify(t), ci = ts.classify(inv);
            bool out = (fwd & ts.counting_mask()) != 0, in = (rev & ts.counting_mask()) != 0;
            CHECK((c == TypeClass::Invertible) == (out && in));
            CHECK((c == TypeClass::Message) == (out && !in));
            CHECK((c == TypeClass::ReverseOnly) == (!out && in));
            CHECK((c == TypeClass::Silent) == (!out && !in));
            if (c == TypeClass::Invertible) CHECK(ci == TypeClass::Invertible);
            if (c == TypeClass::Message) CHECK(ci == TypeClass::ReverseOnly);
            ++total;
          }
    CHECK(total == std::size_t{ts.P()} * ts.P() << (2 * ts.k()));
  }
}

TEST_CASE("M and Lambda indices invert their entries") {
  for (const auto& p : test::corpus(9, 10, 200'000)) {
    TypeSpace ts(p);
    for (OneType pi = 0; pi < ts.P(); ++pi) {
      for (std::uint64_t j = 0; j < ts.Q(); ++j) {
        TwoType t = ts.m_entry(pi, j);
        CHECK(t.pi1 == pi);
        CHECK(ts.m_index(t) == static_cast<std::int64_t>(j));
        CHECK((j < ts.R()) == (ts.classify(t) == TypeClass::Message));
      }
      for (std::uint64_t j = 0; j < ts.lambda_size(); ++j) {
        TwoType t = ts.lambda_entry(pi, j);
        CHECK(ts.classify(t) == TypeClass::Invertible);
        CHECK(ts.lambda_index(t) == static_cast<std::int64_t>(j));
      }
    }
  }
}

TEST_CASE("vector range encodes in mixed radix") {
  VectorRange r({2, 1, 3});
  CHECK(r.size() == 3 * 2 * 4);
  for (std::uint64_t i = 0; i < r.size(); ++i) CHECK(r.encode(r.decode(i)) == i);
  CHECK(r.decode(r.top()) == CountVector{2, 1, 3});
  CHECK(r.encode({1, 0, 0}) == 8);
  CHECK_FALSE(r.contains({3, 0, 0}));
}

TEST_CASE("bit string heap positions") {
  BitString root;
  CHECK(root.node() == 0);
  CHECK(root.child(0).node() == 1);
  CHECK(root.child(1).node() == 2);
  CHECK(root.child(1).child(0).node() == 5);
  for (std::uint64_t n = 0; n < 63; ++n) CHECK(BitString::from_node(n).node() == n);
}
