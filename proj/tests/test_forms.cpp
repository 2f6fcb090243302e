#include "doctest.h"
#include "oddrep/form.hpp"

using namespace oddrep;

TEST_CASE("validate_gram accepts and rejects") {
  CHECK(QuadraticForm::from_gram({{2}}).rank() == 1);
  // x^2 + 2y^2 + 5z^2 + xz, determinant by hand cofactor expansion: 76
  auto q = QuadraticForm::from_gram({{2, 0, 1}, {0, 4, 0}, {1, 0, 10}});
  CHECK(q.disc64() == 76);
  // even diagonal, odd cross terms are fine
  CHECK(QuadraticForm::from_gram({{2, 1}, {1, 2}}).disc64() == 3);
  CHECK_THROWS_WITH_AS(QuadraticForm::from_gram({{2, 1}, {0, 2}}), doctest::Contains("transpose"),
                       Error);
  CHECK_THROWS_AS(QuadraticForm::from_gram({{3}}), Error);
  CHECK_THROWS_AS(QuadraticForm::from_gram({{2, 5}, {5, 2}}), Error);  // not PD
  CHECK_THROWS_AS(QuadraticForm::from_gram({{0}}), Error);
}

TEST_CASE("discriminants") {
  CHECK(QuadraticForm::from_gram({{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}})
            .disc64() == 16);
  CHECK(parse_form("x^2+3y^2+xy").disc64() == 11);
  CHECK(parse_form("x^2+3y^2+3yz+3yw+5z^2+zw+34w^2").disc64() == 6780);
}

TEST_CASE("levels") {
  auto i4 = QuadraticForm::from_gram({{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}});
  CHECK(i4.level() == 4);
  CHECK(parse_form("x^2+xy+3y^2+4z^2+zw+77w^2").level() == 13541);
  CHECK(parse_form("x^2+xy+xw+3y^2+7z^2+7w^2").level() == 2072);
  CHECK(parse_form("x^2+3y^2+3yz+3yw+5z^2+zw+34w^2").level() == 6780);
}

TEST_CASE("dual forms") {
  auto i4 = QuadraticForm::from_gram({{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}});
  CHECK(i4.dual() == i4);  // 2I is self-dual at level 4
  auto q = parse_form("x^2+3y^2+3yz+3yw+5z^2+zw+34w^2");
  auto qs = q.dual();
  CHECK(qs.disc() == Int(6780) * 6780 * 6780);
  // double dual returns the original gram when level(Q*) = level(Q)
  CHECK(qs.level() == q.level());
  CHECK(qs.dual() == q);
}

TEST_CASE("cholesky") {
  auto d26 = QuadraticForm::from_gram({{2, 0}, {0, 6}});
  auto cd = d26.cholesky();
  CHECK(cd.diag[0] == Rat(2));
  CHECK(cd.diag[1] == Rat(6));
  CHECK(cd.unitri[0][1] == Rat(0));
  auto q = QuadraticForm::from_gram({{2, 1}, {1, 6}});
  cd = q.cholesky();
  CHECK(cd.diag[0] == Rat(2));
  CHECK(cd.diag[1] == Rat(11, 2));
  CHECK(cd.unitri[0][1] == Rat(1, 2));
}

TEST_CASE("cholesky reconstructs the gram matrix") {
  // M^T D M = A on a batch of small random forms
  u64 seed = 12345;
  auto rnd = [&] {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<i64>((seed >> 33) % 7) - 3;
  };
  int built = 0;
  while (built < 100) {
    int n = 2 + static_cast<int>((seed >> 20) % 3);
    std::vector<std::vector<i64>> g(n, std::vector<i64>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) g[i][j] = g[j][i] = rnd();
      g[i][i] = 2 * (3 + static_cast<i64>((seed >> 17) % 5));
    }
    try {
      auto q = QuadraticForm::from_gram(g);
      auto cd = q.cholesky();
      int r = q.rank();
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          Rat acc = 0;
          for (int k = 0; k < r; ++k) acc += cd.unitri[k][i] * cd.diag[k] * cd.unitri[k][j];
          CHECK(acc == Rat(q.gram(i, j)));
        }
      ++built;
    } catch (const Error&) {
      rnd();
    }
  }
}

TEST_CASE("polynomial parser") {
  auto q = parse_form("x^2 + 3*y^2 + x*y");
  CHECK(q.gram_matrix() == std::vector<std::vector<i64>>{{2, 1}, {1, 6}});
  CHECK(parse_form("x^2+3y^2+xy") == q);
  CHECK(parse_form(form_to_json(q)) == q);
  CHECK(parse_form("x^2+2y^2+5z^2+5w^2").rank() == 4);
  CHECK(parse_form("x^2+3y^2+11z^2+xy+7yz").disc64() ==
        QuadraticForm::from_gram({{2, 1, 0}, {1, 6, 7}, {0, 7, 22}}).disc64());
  CHECK_THROWS_AS(parse_form("x^2+3x"), Error);
  CHECK_THROWS_AS(parse_form("x^3"), Error);
  CHECK_THROWS_AS(parse_form("{\"nope\": 1}"), Error);
}

TEST_CASE("evaluation") {
  auto q = parse_form("x^2+2y^2+5z^2+xz");
  CHECK(q.evaluate({1, 0, 0}) == 1);
  CHECK(q.evaluate({1, 1, 1}) == 9);
  CHECK(q.evaluate({-2, 1, 3}) == 45 + 4 + 2 - 6);
}
