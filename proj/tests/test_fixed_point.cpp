//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <boost/rational.hpp>
#include <random>

#include "rnnfast/fixed_point.hpp"

using namespace rnnfast;
using Rational = boost::rational<long long>;

namespace {

Fixed fx(double v) { return Fixed::from_real(v); }

// Round a rational to the nearest multiple of 1/256, ties to even, then saturate.
std::int16_t round_rational(const Rational& r) {
  const Rational scaled = r * Rational(256);
  long long fl = scaled.numerator() / scaled.denominator();
  if (Rational(fl) > scaled) --fl;
  const Rational frac = scaled - Rational(fl);
  long long out = fl;
  if (frac > Rational(1, 2) || (frac == Rational(1, 2) && (fl % 2 != 0))) out = fl + 1;
  return static_cast<std::int16_t>(std::clamp(out, -32768LL, 32767LL));
}

}  // namespace

TEST_CASE("from_real rounding and saturation") {
  CHECK(fx(1.0).raw() == 256);
  CHECK(fx(0.00195).raw() == 0);
  CHECK(fx(200.0).raw() == 32767);
  CHECK(fx(-200.0).raw() == -32768);
  CHECK(fx(0.5 / 256).raw() == 0);       // tie to even
  CHECK(fx(1.5 / 256).raw() == 2);       // tie to even
  CHECK(fx(-0.5 / 256).raw() == 0);
  CHECK(fx(-1.5 / 256).raw() == -2);
  CHECK_THROWS(Fixed::from_real(std::nan("")));
}

TEST_CASE("round trip over every raw value") {
  for (int r = -32768; r <= 32767; ++r) {
    const Fixed f = Fixed::from_raw(static_cast<std::int16_t>(r));
    REQUIRE(Fixed::from_real(f.to_real()) == f);
  }
}

TEST_CASE("add, mul, neg examples") {
  CHECK(mul(fx(0.5), fx(0.5)) == fx(0.25));
  CHECK(add(fx(127.5), fx(10.0)).raw() == 32767);
  CHECK(add(fx(-127.5), fx(-10.0)).raw() == -32768);
  CHECK(neg(Fixed::from_raw(-32768)).raw() == 32767);
  for (int r = -32767; r <= 32767; ++r) {
    const Fixed x = Fixed::from_raw(static_cast<std::int16_t>(r));
    REQUIRE(mul(fx(-1.0), x) == neg(x));
  }
}

TEST_CASE("commutativity and product error bound") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> d(-32768, 32767);
  for (int i = 0; i < 200000; ++i) {
    const Fixed a = Fixed::from_raw(static_cast<std::int16_t>(d(gen)));
    const Fixed b = Fixed::from_raw(static_cast<std::int16_t>(d(gen)));
    REQUIRE(add(a, b) == add(b, a));
    REQUIRE(mul(a, b) == mul(b, a));
    const double exact = a.to_real() * b.to_real();
    const double clamped = std::clamp(exact, -128.0, 32767.0 / 256.0);
    REQUIRE(std::abs(mul(a, b).to_real() - clamped) <= 1.0 / 512.0 + 1e-12);
  }
}

TEST_CASE("mul agrees with rational rounding") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> d(-32768, 32767);
  for (int i = 0; i < 20000; ++i) {
    const int a = d(gen);
    const int b = d(gen);
    const Rational exact = Rational(a, 256) * Rational(b, 256);
    REQUIRE(mul(Fixed::from_raw(static_cast<std::int16_t>(a)), Fixed::from_raw(static_cast<std::int16_t>(b))).raw() ==
            round_rational(exact));
  }
}

TEST_CASE("wide accumulation examples") {
  WideAccumulator acc;
  for (int i = 0; i < 256; ++i) acc = mac_accumulate(acc, fx(1.0), fx(1.0));
  CHECK(narrow(acc).raw() == 32767);

  WideAccumulator c;
  c = mac_accumulate(c, fx(1.0), fx(2.0));
  c = mac_accumulate(c, fx(-1.0), fx(2.0));
  CHECK(narrow(c) == Fixed{});
}

TEST_CASE("no overflow across 2^16 extreme products") {
  WideAccumulator acc;
  const Fixed m = Fixed::from_raw(-32768);
  for (int i = 0; i < 65536; ++i) acc.add_product(m, m);
  CHECK(acc.raw() == 65536LL * 32768LL * 32768LL);
  CHECK(acc.narrow().raw() == 32767);
}

TEST_CASE("64-term dot product matches a rational oracle rounded once") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> d(-512, 512);
  for (int trial = 0; trial < 500; ++trial) {
    WideAccumulator acc;
    Rational exact(0);
    for (int i = 0; i < 64; ++i) {
      const int a = d(gen);
      const int b = d(gen);
      acc.add_product(Fixed::from_raw(static_cast<std::int16_t>(a)), Fixed::from_raw(static_cast<std::int16_t>(b)));
      exact += Rational(a, 256) * Rational(b, 256);
    }
    REQUIRE(acc.narrow().raw() == round_rational(exact));
  }
}

TEST_CASE("accumulation is order independent") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> d(-32768, 32767);
  std::vector<std::pair<Fixed, Fixed>> terms;
  for (int i = 0; i < 300; ++i) {
    terms.emplace_back(Fixed::from_raw(static_cast<std::int16_t>(d(gen))), Fixed::from_raw(static_cast<std::int16_t>(d(gen))));
  }
  WideAccumulator base;
  for (auto& [a, b] : terms) base.add_product(a, b);
  for (int perm = 0; perm < 20; ++perm) {
    std::shuffle(terms.begin(), terms.end(), gen);
    WideAccumulator acc;
    for (auto& [a, b] : terms) acc.add_product(a, b);
    REQUIRE(acc.narrow() == base.narrow());
  }
}
