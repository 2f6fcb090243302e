#include "oddrep/isometry.hpp"

#include <algorithm>
#include <map>

#include "oddrep/theta.hpp"

namespace oddrep {

QuadraticForm reduce(const QuadraticForm& q, std::vector<std::vector<i64>>* basis) {
  int n = q.rank();
  std::vector<std::vector<i64>> g = q.gram_matrix();
  std::vector<std::vector<i64>> U(n, std::vector<i64>(n, 0));
  for (int i = 0; i < n; ++i) U[i][i] = 1;

  auto axpy = [&](int j, int i, i64 c) {
    // b_j <- b_j + c b_i
    i64 gii = g[i][i], gij = g[i][j];
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      g[j][k] = checked_add(g[j][k], checked_mul(c, g[i][k]));
      g[k][j] = g[j][k];
    }
    g[j][j] = checked_add(g[j][j], checked_add(checked_mul(2 * c, gij),
                                               checked_mul(checked_mul(c, c), gii)));
    for (int k = 0; k < n; ++k) U[k][j] = checked_add(U[k][j], checked_mul(c, U[k][i]));
  };
  auto swap_cols = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(g[i][k], g[j][k]);
    for (int k = 0; k < n; ++k) std::swap(g[k][i], g[k][j]);
    for (int k = 0; k < n; ++k) std::swap(U[k][i], U[k][j]);
  };

  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 10000) {
    changed = false;
    // keep diagonal sorted ascending
    for (int i = 0; i + 1 < n; ++i)
      if (g[i + 1][i + 1] < g[i][i]) {
        swap_cols(i, i + 1);
        changed = true;
      }
    // size-reduce pairs
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        i64 num = g[i][j], den = g[i][i];
        // nearest integer to num/den
        i64 c = (2 * num + (num >= 0 ? den : -den)) / (2 * den);
        if (c != 0) {
          axpy(j, i, -c);
          changed = true;
        }
      }
  }
  // canonical signs: make first nonzero off-diagonal entry in each column positive
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (g[i][j] != 0) {
        if (g[i][j] < 0) {
          for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            g[j][k] = -g[j][k];
            g[k][j] = g[j][k];
          }
          for (int k = 0; k < n; ++k) U[k][j] = -U[k][j];
        }
        break;
      }
    }
  }
  if (basis) *basis = U;
  return QuadraticForm::from_gram(std::move(g));
}

std::vector<i64> successive_minima(const QuadraticForm& q) {
  int n = q.rank();
  if (n == 0) return {};
  QuadraticForm r = reduce(q);
  i64 bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, r.gram(i, i) / 2);
  for (;;) {
    // collect (norm, vector), ascending by norm
    std::vector<std::pair<i64, std::vector<i64>>> vecs;
    enumerate_vectors(r, bound, [&](const std::vector<i64>& x, i64 val) {
      if (val > 0) vecs.emplace_back(val, x);
    });
    std::stable_sort(vecs.begin(), vecs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    // greedy linearly independent picks, exact rank via rational elimination
    std::vector<std::vector<Rat>> rows;
    std::vector<i64> minima;
    for (auto& [norm, v] : vecs) {
      std::vector<Rat> w(v.begin(), v.end());
      for (const auto& row : rows) {
        int piv = -1;
        for (int k = 0; k < n; ++k)
          if (row[k] != 0) {
            piv = k;
            break;
          }
        if (piv >= 0 && w[piv] != 0) {
          Rat c = w[piv] / row[piv];
          for (int k = 0; k < n; ++k) w[k] -= c * row[k];
        }
      }
      bool nonzero = false;
      for (int k = 0; k < n; ++k)
        if (w[k] != 0) nonzero = true;
      if (nonzero) {
        rows.push_back(w);
        minima.push_back(norm);
        if (static_cast<int>(minima.size()) == n) return minima;
      }
    }
    bound *= 2;  // not enough independent vectors below bound (rare)
  }
}

namespace {

// Finds integer columns v_1..v_m in L_Q with v_i^T A_Q v_j = target[i][j].
// When unimodular is set, requires m = rank(Q) (determinant condition is then
// automatic from equal discriminants).
std::optional<std::vector<std::vector<i64>>> gram_match(
    const QuadraticForm& q, const std::vector<std::vector<i64>>& target, int m) {
  int n = q.rank();
  const auto& A = q.gram_matrix();
  // candidate vectors per column, keyed by needed norm (Gram diagonal)
  std::map<i64, std::vector<std::vector<i64>>> pool;
  for (int i = 0; i < m; ++i) {
    i64 diag = target[i][i];
    if (diag % 2 != 0) return std::nullopt;
    if (!pool.count(diag)) {
      auto reps = representations(q, diag / 2);
      pool[diag] = std::move(reps);
    }
    if (pool[diag].empty()) return std::nullopt;
  }
  std::vector<std::vector<i64>> chosen(m);
  std::vector<std::vector<i64>> Av;  // cached A * v_i
  auto mulA = [&](const std::vector<i64>& v) {
    std::vector<i64> out(n, 0);
    for (int r = 0; r < n; ++r) {
      i64 acc = 0;
      for (int c = 0; c < n; ++c) acc += A[r][c] * v[c];
      out[r] = acc;
    }
    return out;
  };
  std::function<bool(int)> dfs = [&](int i) -> bool {
    if (i == m) return true;
    for (const auto& cand : pool[target[i][i]]) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        i64 ip = 0;
        for (int k = 0; k < n; ++k) ip += Av[j][k] * cand[k];
        if (ip != target[j][i]) ok = false;
      }
      if (!ok) continue;
      chosen[i] = cand;
      Av.push_back(mulA(cand));
      if (dfs(i + 1)) return true;
      Av.pop_back();
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  // columns to row-major matrix n x m
  std::vector<std::vector<i64>> L(n, std::vector<i64>(m));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) L[k][i] = chosen[i][k];
  return L;
}

}  // namespace

std::optional<std::vector<std::vector<i64>>> isometry(const QuadraticForm& q1,
                                                      const QuadraticForm& q2) {
  if (q1.rank() != q2.rank()) return std::nullopt;
  if (q1.disc() != q2.disc() || q1.level() != q2.level()) return std::nullopt;
  int n = q1.rank();
  if (n == 0) return std::vector<std::vector<i64>>{};
  std::vector<std::vector<i64>> basis2;
  QuadraticForm r1 = reduce(q1);
  QuadraticForm r2 = reduce(q2, &basis2);
  auto m1 = successive_minima(r1);
  auto m2 = successive_minima(r2);
  if (m1 != m2) return std::nullopt;
  // theta prefix check up to the largest reduced diagonal
  i64 tb = 0;
  for (int i = 0; i < n; ++i) tb = std::max(tb, std::max(r1.gram(i, i), r2.gram(i, i)) / 2);
  auto t1 = theta_series(q1, tb);
  auto t2 = theta_series(q2, tb);
  if (t1.coeff != t2.coeff) return std::nullopt;
  // match reduced r2 inside q1, then undo the r2 change of basis
  auto L = gram_match(q1, r2.gram_matrix(), n);
  if (!L) return std::nullopt;
  // q1-columns W with W^T A1 W = r2 = basis2^T A2 basis2 => U = W * basis2^{-1}
  // works in exact rationals; entries must come out integral
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, 0));
  {
    auto big = std::vector<std::vector<Int>>(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) big[i][j] = basis2[i][j];
    Int det = det_int(big);
    auto adj = adjugate_int(big);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) inv[i][j] = Rat(adj[i][j]) / Rat(det);
  }
  std::vector<std::vector<i64>> U(n, std::vector<i64>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat acc = 0;
      for (int k = 0; k < n; ++k) acc += Rat((*L)[i][k]) * inv[k][j];
      if (boost::multiprecision::denominator(acc) != 1) return std::nullopt;
      U[i][j] = to_i64(boost::multiprecision::numerator(acc));
    }
  return U;
}

bool is_isometric(const QuadraticForm& q1, const QuadraticForm& q2) {
  return isometry(q1, q2).has_value();
}

std::optional<Embedding> represents_form(const QuadraticForm& q, const QuadraticForm& r) {
  if (r.rank() > q.rank()) return std::nullopt;
  if (r.rank() == 0) return Embedding{};
  auto L = gram_match(q, r.gram_matrix(), r.rank());
  if (!L) return std::nullopt;
  Embedding e;
  e.cols.assign(r.rank(), std::vector<i64>(q.rank()));
  for (int i = 0; i < r.rank(); ++i)
    for (int k = 0; k < q.rank(); ++k) e.cols[i][k] = (*L)[k][i];
  return e;
}

}  // namespace oddrep
