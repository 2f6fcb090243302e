#include "doctest.h"
#include "oddrep/isometry.hpp"
#include "oddrep/theta.hpp"

using namespace oddrep;

namespace {

QuadraticForm random_form(u64& seed, int n) {
  for (;;) {
    std::vector<std::vector<i64>> g(n, std::vector<i64>(n, 0));
    for (int i = 0; i < n; ++i) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      g[i][i] = 2 + 2 * static_cast<i64>((seed >> 33) % 6);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        g[i][j] = g[j][i] = static_cast<i64>((seed >> 33) % 3) - 1;
      }
    try {
      return QuadraticForm::from_gram(g);
    } catch (const Error&) {
    }
  }
}

// random unimodular change of basis by shear compositions
QuadraticForm transform(const QuadraticForm& q, u64& seed) {
  int n = q.rank();
  std::vector<std::vector<i64>> g = q.gram_matrix();
  for (int step = 0; step < 6; ++step) {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    int i = static_cast<int>((seed >> 33) % n);
    int j = static_cast<int>((seed >> 43) % n);
    if (i == j) continue;
    i64 c = static_cast<i64>((seed >> 53) % 3) - 1;
    if (c == 0) continue;
    // b_j += c b_i
    i64 gii = g[i][i], gij = g[i][j];
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      g[j][k] += c * g[i][k];
      g[k][j] = g[j][k];
    }
    g[j][j] += 2 * c * gij + c * c * gii;
  }
  return QuadraticForm::from_gram(g);
}

}  // namespace

TEST_CASE("isometry under permutation and sign flips") {
  auto a = QuadraticForm::from_gram({{2, 1}, {1, 6}});
  auto b = QuadraticForm::from_gram({{2, -1}, {-1, 6}});
  auto c = QuadraticForm::from_gram({{6, 1}, {1, 2}});
  CHECK(is_isometric(a, b));
  CHECK(is_isometric(a, c));
  auto w = isometry(a, b);
  REQUIRE(w);
  // verify the witness: U^T A_a U = A_b
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      i64 acc = 0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) acc += (*w)[k][i] * a.gram(k, l) * (*w)[l][j];
      CHECK(acc == b.gram(i, j));
    }
}

TEST_CASE("non-isometric pairs with equal discriminant") {
  // x^2 + 6y^2 vs 2x^2 + 3y^2: disc 24 both, different minima
  auto a = QuadraticForm::from_gram({{2, 0}, {0, 12}});
  auto b = QuadraticForm::from_gram({{4, 0}, {0, 6}});
  CHECK(!is_isometric(a, b));
}

TEST_CASE("reduce keeps the class and sorts minima") {
  CHECK(successive_minima(parse_form("x^2+2y^2")) == std::vector<i64>{1, 2});
  CHECK(successive_minima(parse_form("x^2+3y^2+xy")) == std::vector<i64>{1, 3});
  u64 seed = 7;
  for (int trial = 0; trial < 100; ++trial) {
    auto q = random_form(seed, 2 + static_cast<int>(seed % 3));
    auto r = reduce(q);
    CHECK(is_isometric(q, r));
    auto m = successive_minima(q);
    for (size_t i = 0; i + 1 < m.size(); ++i) CHECK(m[i] <= m[i + 1]);
  }
}

TEST_CASE("isometry is stable under random unimodular transport") {
  u64 seed = 31337;
  for (int trial = 0; trial < 60; ++trial) {
    auto q = random_form(seed, 3);
    auto q2 = transform(q, seed);
    CHECK(is_isometric(q, q2));
    CHECK(successive_minima(q) == successive_minima(q2));
  }
}

TEST_CASE("represents_form finds and rejects embeddings") {
  // any form with r(1) > 0 represents x^2
  auto q = parse_form("x^2+2y^2+5z^2+xz");
  CHECK(represents_form(q, parse_form("x^2")));
  // x^2+2y^2 represents 3 = 1 + 2 but not 5
  CHECK(represents_form(parse_form("x^2+2y^2"), QuadraticForm::from_gram({{6}})).has_value());
  CHECK(!represents_form(parse_form("x^2+2y^2"), QuadraticForm::from_gram({{10}})));
  // the largest-level method-1 example contains an odd-universal ternary:
  // Q(x, y, 0, -z) with the 7 z^2 coefficient carried along
  auto big = parse_form("x^2+xy+xw+3y^2+7z^2+7w^2");
  auto tern = parse_form("x^2+xy-xz+3y^2+7z^2");
  auto emb = represents_form(big, tern);
  REQUIRE(emb);
  // verify L^T A L = A_tern
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      i64 acc = 0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) acc += emb->cols[i][k] * big.gram(k, l) * emb->cols[j][l];
      CHECK(acc == tern.gram(i, j));
    }
  // restriction to w = 0, z -> -z of the big form is the ternary itself
  auto sub = QuadraticForm::from_gram({{2, 1, -1}, {1, 6, 0}, {-1, 0, 14}});
  CHECK(is_isometric(sub, tern));
}
