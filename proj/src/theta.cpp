#include "oddrep/theta.hpp"

#include <algorithm>
#include <cmath>

namespace oddrep {

namespace {

// Backtracking enumeration over the Cholesky box. Floating-point bounds are
// widened by a fixed margin; every emitted vector is re-checked exactly, so
// the float arithmetic only steers the search.
struct Enumerator {
  const QuadraticForm& q;
  int n;
  double bound;
  double margin;
  std::vector<std::vector<double>> m;  // unitriangular rows
  std::vector<double> d;               // Q-value convention: a_i / 2
  std::vector<i64> x;
  std::vector<double> center;          // center[i] = sum_{j>i} m[i][j] x_j
  std::vector<double> partial;         // partial[i] = contribution of levels > i
  const std::function<void(const std::vector<i64>&, i64)>& visit;
  u64 max_vectors;
  u64 visited = 0;

  Enumerator(const QuadraticForm& qq, i64 B,
             const std::function<void(const std::vector<i64>&, i64)>& fn, u64 maxv)
      : q(qq), n(qq.rank()), bound(static_cast<double>(B)), visit(fn), max_vectors(maxv) {
    auto cd = q.cholesky();
    m.assign(n, std::vector<double>(n, 0.0));
    d.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      d[i] = to_double(Rat(cd.diag[i]) / 2);
      for (int j = 0; j < n; ++j) m[i][j] = to_double(cd.unitri[i][j]);
    }
    x.assign(n, 0);
    center.assign(n + 1, 0.0);
    partial.assign(n + 1, 0.0);
    margin = 1e-3 + 1e-9 * bound;
  }

  // levels i..n-1 assigned top-down; "lead" true while all higher coords are 0
  void rec(int i, bool lead) {
    if (i < 0) {
      if (lead) return;  // zero vector
      i64 val = q.evaluate(x);
      if (val <= static_cast<i64>(bound)) {
        if (++visited > max_vectors)
          throw Error(ErrorCode::BudgetExceeded, "enumeration budget exceeded");
        visit(x, val);
      }
      return;
    }
    double rem = bound + margin - partial[i + 1];
    if (rem < 0) return;
    double c = 0.0;
    for (int j = i + 1; j < n; ++j) c += m[i][j] * x[j];
    double w = std::sqrt(std::max(0.0, rem / d[i]));
    i64 lo = static_cast<i64>(std::ceil(-c - w - margin));
    i64 hi = static_cast<i64>(std::floor(-c + w + margin));
    if (lead) lo = std::max<i64>(lo, 0);  // +- representative: leading coordinate >= 0
    for (i64 v = lo; v <= hi; ++v) {
      x[i] = v;
      double t = (v + c);
      partial[i] = partial[i + 1] + d[i] * t * t;
      rec(i - 1, lead && v == 0);
    }
    x[i] = 0;
  }

  void run() {
    if (n == 0) return;
    rec(n - 1, true);
  }
};

}  // namespace

u64 enumerate_vectors(const QuadraticForm& q, i64 bound,
                      const std::function<void(const std::vector<i64>&, i64)>& visit,
                      const EnumBudget& budget) {
  if (bound < 0) return 0;
  Enumerator e(q, bound, visit, budget.max_vectors);
  e.run();
  return e.visited;
}

ThetaSeries theta_series(const QuadraticForm& q, i64 bound, const EnumBudget& budget) {
  if (bound < 0) throw Error(ErrorCode::NonPositiveArgument, "negative theta precision");
  ThetaSeries t;
  t.precision = bound;
  t.coeff.assign(static_cast<size_t>(bound) + 1, 0);
  t.coeff[0] = 1;
  enumerate_vectors(
      q, bound,
      [&](const std::vector<i64>&, i64 val) { t.coeff[static_cast<size_t>(val)] += 2; },
      budget);
  return t;
}

std::vector<std::vector<i64>> representations(const QuadraticForm& q, i64 n,
                                              const EnumBudget& budget) {
  if (n < 0) return {};
  std::vector<std::vector<i64>> out;
  if (n == 0) {
    out.emplace_back(q.rank(), 0);
    return out;
  }
  enumerate_vectors(
      q, n,
      [&](const std::vector<i64>& x, i64 val) {
        if (val != n) return;
        out.push_back(x);
        std::vector<i64> neg(x.size());
        for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
        out.push_back(std::move(neg));
      },
      budget);
  std::sort(out.begin(), out.end());
  return out;
}

Int partial_sum(const QuadraticForm& q, i64 x, const EnumBudget& budget) {
  Int total = 1;  // zero vector
  enumerate_vectors(
      q, x, [&](const std::vector<i64>&, i64) { total += 2; }, budget);
  return total;
}

double partial_sum_box_bound(const QuadraticForm& q, i64 x) {
  // Q(y) <= x pins coordinate i to an interval of length 2 sqrt(x / (a_i/2)),
  // a_i the exact Cholesky diagonal in Gram convention
  auto cd = q.cholesky();
  double prod = 1.0;
  for (const auto& a : cd.diag)
    prod *= 2.0 * std::sqrt(2.0 * static_cast<double>(x) / to_double(a)) + 1.0;
  return prod;
}

ThetaBitmap::ThetaBitmap(const QuadraticForm& q, i64 bound, const EnumBudget& budget) {
  bound_ = bound;
  bits_.assign(static_cast<size_t>(bound / 64) + 1, 0);
  bits_[0] |= 1;  // zero represented
  enumerate_vectors(
      q, bound,
      [&](const std::vector<i64>&, i64 val) {
        bits_[static_cast<size_t>(val >> 6)] |= u64(1) << (val & 63);
      },
      budget);
}

}  // namespace oddrep
