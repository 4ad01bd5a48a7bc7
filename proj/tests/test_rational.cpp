#include "test_util.hpp"

#include <mwall/rational.hpp>
#include <mwall/rng.hpp>

using namespace mwall;

TEST_CASE("rational parsing accepts integer and fraction notation") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("-7/2") == Rat(-7, 2));
  CHECK(parse_rat("0") == Rat(0));
  CHECK(parse_rat("42") == Rat(42));
  // Only '-' is accepted as a sign prefix; canonical output never uses '+'.
  CHECK_THROWS_MATCHES(parse_rat("+5"), Error, ErrorCodeIs(ErrorCode::ParseError));
  // Non-canonical input is canonicalised.
  Rat q = parse_rat("6/8");
  CHECK(q == Rat(3, 4));
  CHECK(q.get_num() == 3);
  CHECK(q.get_den() == 4);
}

TEST_CASE("rational parsing rejects decimals, junk, and zero denominators") {
  CHECK_THROWS_MATCHES(parse_rat("1.5"), Error,
                       ErrorCodeIs(ErrorCode::ParseError));
  CHECK_THROWS_MATCHES(parse_rat(""), Error, ErrorCodeIs(ErrorCode::ParseError));
  CHECK_THROWS_MATCHES(parse_rat("1e3"), Error,
                       ErrorCodeIs(ErrorCode::ParseError));
  CHECK_THROWS_MATCHES(parse_rat("one"), Error,
                       ErrorCodeIs(ErrorCode::ParseError));
  CHECK_THROWS_MATCHES(parse_rat("1/0"), Error,
                       ErrorCodeIs(ErrorCode::ParseError));
  // The context tag is carried into the message.
  try {
    parse_rat("1.5", "field");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("field") != std::string::npos);
  }
}

TEST_CASE("rational round trip through the string form is exact") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rat q = rng.rational(1000, 1000);
    CHECK(parse_rat(rat_str(q)) == q);
  }
  CHECK(rat_str(Rat(3, 4)) == "3/4");
  CHECK(rat_str(Rat(-3, 4)) == "-3/4");
  CHECK(rat_str(Rat(5)) == "5");
  CHECK(rat_str(Rat(0)) == "0");
}

TEST_CASE("denominator rounding returns the nearest dyadic of the given depth") {
  // 1/3 to 4 bits: nearest multiple of 1/16 is 5/16 (distance 1/48 < 1/24).
  CHECK(round_denominator(Rat(1, 3), 4) == Rat(5, 16));
  CHECK(round_denominator(Rat(-1, 3), 4) == Rat(-5, 16));
  // Exact dyadics are fixed points.
  CHECK(round_denominator(Rat(7, 8), 10) == Rat(7, 8));
  // Ties round away from zero: 3/32 at 4 bits sits between 1/16 and 2/16.
  CHECK(round_denominator(Rat(3, 32), 4) == Rat(1, 8));
  CHECK(round_denominator(Rat(-3, 32), 4) == Rat(-1, 8));

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Rat q = rng.rational(500, 500);
    Rat r = round_denominator(q, 12);
    // Denominator divides 2^12 and the distance is at most half a step.
    Int den = r.get_den();
    CHECK((Int(1) << 12) % den == 0);
    CHECK(abs_rat(r - q) * (Int(1) << 13) <= 1);
  }
}

TEST_CASE("floor, ceiling, and square-root bounds are exact") {
  CHECK(floor_rat(Rat(7, 2)) == 3);
  CHECK(floor_rat(Rat(-7, 2)) == -4);
  CHECK(ceil_rat(Rat(7, 2)) == 4);
  CHECK(ceil_rat(Rat(-7, 2)) == -3);
  CHECK(floor_rat(Rat(5)) == 5);
  CHECK(ceil_rat(Rat(5)) == 5);

  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    Rat q(rng.integer(0, 10000), rng.integer(1, 100));
    q.canonicalize();
    Int lo = floor_sqrt(q);
    Int hi = ceil_sqrt(q);
    CHECK(Rat(lo * lo) <= q);
    CHECK(Rat((lo + 1) * (lo + 1)) > q);
    CHECK(Rat(hi * hi) >= q);
    if (hi > 0) CHECK(Rat((hi - 1) * (hi - 1)) < q);
  }
}

TEST_CASE("vector content and primitive normal form") {
  CHECK(content({Int(4), Int(-6), Int(8)}) == 2);
  CHECK(content({Int(0), Int(0)}) == 0);
  CHECK(primitive_vector({Int(4), Int(-6)}) == IntVec{Int(2), Int(-3)});
  CHECK(primitive_vector({Int(-4), Int(6)}) == IntVec{Int(2), Int(-3)});
  CHECK(primitive_vector({Int(0), Int(-5)}) == IntVec{Int(0), Int(1)});
  CHECK(primitive_vector({Int(0), Int(0)}) == IntVec{Int(0), Int(0)});
  CHECK(primitive_direction({Rat(1, 2), Rat(-3, 4)}) ==
        IntVec{Int(2), Int(-3)});
  CHECK(common_denominator({Rat(1, 2), Rat(5, 6), Rat(3)}) == 6);
  CHECK(sup_norm({Rat(1, 2), Rat(-5, 3), Rat(0)}) == Rat(5, 3));
}

TEST_CASE("seeded random streams are reproducible and honour their ranges") {
  Rng a(42), b(42), c(43);
  bool diverged = false;
  for (int i = 0; i < 50; ++i) {
    long x = a.integer(-9, 9);
    CHECK(x == b.integer(-9, 9));
    if (x != c.integer(-9, 9)) diverged = true;
    CHECK(x >= -9);
    CHECK(x <= 9);
  }
  CHECK(diverged);
  Rng d(1);
  for (int i = 0; i < 50; ++i) {
    Rat q = d.positive_rational(8, 8);
    CHECK(q > 0);
    CHECK(q <= 8);
  }
}
