#include "doctest.h"
#include "oddrep/arith.hpp"

using namespace oddrep;

TEST_CASE("isqrt and squares") {
  CHECK(isqrt64(0) == 0);
  CHECK(isqrt64(15) == 3);
  CHECK(isqrt64(16) == 4);
  CHECK(isqrt64(999999999999999999LL) == 999999999);
  CHECK(is_square64(4));
  CHECK(!is_square64(5));
}

TEST_CASE("factorize and divisor counts") {
  auto f = factorize(6780);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == std::pair<i64, int>{2, 2});
  CHECK(f[3] == std::pair<i64, int>{113, 1});
  CHECK(divisor_count(12) == 6);
  CHECK(omega64(6780) == 4);
  CHECK(is_squarefree(105));
  CHECK(!is_squarefree(45));
  CHECK(is_prime64(1231));
  CHECK(!is_prime64(13541));  // 11 * 1231
}

TEST_CASE("kronecker symbol") {
  // quadratic reciprocity spot values
  CHECK(kronecker(6780, 7) == 1);
  CHECK(kronecker(6780, 13) == -1);
  CHECK(kronecker(5, 5) == 0);
  CHECK(kronecker(1, 1) == 1);
  CHECK(kronecker(-1, 3) == -1);
  CHECK(kronecker(2, 7) == 1);
  CHECK(kronecker(2, 5) == -1);
  // multiplicativity on a grid
  for (i64 a = -8; a <= 8; ++a)
    for (i64 b = -8; b <= 8; ++b)
      for (i64 n : {3, 5, 15, 21}) {
        if (a == 0 || b == 0) continue;
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
      }
}

TEST_CASE("fundamental discriminants") {
  i64 c;
  CHECK(fundamental_discriminant(6780, c) == 6780);
  CHECK(c == 1);
  CHECK(fundamental_discriminant(4200, c) == 168);
  CHECK(c == 5);
  CHECK(fundamental_discriminant(16, c) == 1);
  CHECK(c == 4);
  CHECK(is_fundamental_discriminant(5));
  CHECK(is_fundamental_discriminant(8));
  CHECK(is_fundamental_discriminant(12));
  CHECK(!is_fundamental_discriminant(4200));
  CHECK(!is_fundamental_discriminant(20));
  CHECK(!is_fundamental_discriminant(9));
}
