#include "oddrep/local.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <functional>

namespace oddrep {

// ---------------------------------------------------------------------------
// Hilbert symbol
// ---------------------------------------------------------------------------
namespace {
int legendre(i64 a, i64 p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  // Euler criterion via fast powmod
  u64 r = 1, b = static_cast<u64>(a), e = static_cast<u64>((p - 1) / 2);
  while (e) {
    if (e & 1) r = (unsigned __int128)r * b % p;
    b = (unsigned __int128)b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : (r == 0 ? 0 : -1);
}

// strip p^k, return (unit part as Int, valuation)
std::pair<Int, i64> split_p(Int a, i64 p) {
  i64 v = 0;
  while (a % p == 0) a /= p, ++v;
  return {a, v};
}
}  // namespace

int hilbert_symbol(const Int& a0, const Int& b0, i64 p) {
  if (a0 == 0 || b0 == 0) throw Error(ErrorCode::NonPositiveArgument, "hilbert symbol of 0");
  if (p == 0) return (a0 < 0 && b0 < 0) ? -1 : 1;
  if (p == 2) {
    auto [u, al] = split_p(a0, 2);
    auto [v, be] = split_p(b0, 2);
    i64 um = to_i64(((u % 8) + 8) % 8);
    i64 vm = to_i64(((v % 8) + 8) % 8);
    auto eps = [](i64 x) { return (x % 4 == 3) ? 1 : 0; };      // (x-1)/2 mod 2
    auto om = [](i64 x) { return (x == 3 || x == 5) ? 1 : 0; };  // (x^2-1)/8 mod 2
    i64 e = eps(um) * eps(vm) + al * om(vm) + be * om(um);
    return (e % 2 == 0) ? 1 : -1;
  }
  auto [u, al] = split_p(a0, p);
  auto [v, be] = split_p(b0, p);
  i64 um = to_i64(((u % p) + p) % p);
  i64 vm = to_i64(((v % p) + p) % p);
  int s = 1;
  if ((al % 2) && (be % 2) && legendre(p - 1, p) == -1) s = -s;
  if (be % 2) s *= legendre(um, p);
  if (al % 2) s *= legendre(vm, p);
  return s;
}

// ---------------------------------------------------------------------------
// Jordan splitting
// ---------------------------------------------------------------------------
namespace {

i64 rat_val(const Rat& x, i64 p) {
  if (x == 0) return std::numeric_limits<i64>::max() / 2;
  Int num = boost::multiprecision::numerator(x);
  Int den = boost::multiprecision::denominator(x);
  i64 v = 0;
  while (num % p == 0) num /= p, ++v;
  while (den % p == 0) den /= p, --v;
  return v;
}

// unit part of x (p-adic), reduced mod m
i64 unit_mod(const Rat& x, i64 p, i64 m) {
  Int num = boost::multiprecision::numerator(x);
  Int den = boost::multiprecision::denominator(x);
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  Int nm = ((num % m) + m) % m;
  Int dm = ((den % m) + m) % m;
  // invert dm mod m
  i64 d = to_i64(dm), inv = 1;
  for (i64 k = 1; k < m; ++k)
    if ((d * k) % m == 1) {
      inv = k;
      break;
    }
  return to_i64((nm * inv) % m);
}

}  // namespace

JordanSplitting jordan_splitting(const QuadraticForm& q, i64 p) {
  int n = q.rank();
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = q.gram(i, j);
  std::vector<int> alive(n);
  for (int i = 0; i < n; ++i) alive[i] = i;
  JordanSplitting js;
  js.p = p;

  auto clear_diag_pivot = [&](int i) {
    for (int k : alive) {
      if (k == i || A[i][k] == 0) continue;
      Rat c = A[i][k] / A[i][i];
      for (int t = 0; t < n; ++t) A[k][t] -= c * A[i][t];
      for (int t = 0; t < n; ++t) A[t][k] -= c * A[t][i];
    }
  };

  while (!alive.empty()) {
    i64 best = std::numeric_limits<i64>::max() / 2;
    int bi = -1, bj = -1;
    for (int i : alive)
      for (int j : alive) {
        i64 v = rat_val(A[i][j], p);
        if (v < best) best = v, bi = i, bj = j;
      }
    assert(bi >= 0);
    int diag = -1;
    for (int i : alive)
      if (A[i][i] != 0 && rat_val(A[i][i], p) == best) {
        diag = i;
        break;
      }
    if (diag >= 0) {
      clear_diag_pivot(diag);
      Rat c = A[diag][diag] / 2;  // Q-value coefficient
      i64 s = rat_val(c, p);
      JordanBlock b;
      b.kind = JordanBlock::Unit;
      b.scale = static_cast<int>(s);
      if (p == 2) {
        b.unit = unit_mod(c, 2, 8);
      } else if (legendre(unit_mod(c, p, p), p) == 1) {
        b.unit = 1;
      } else {
        i64 nr = 2;
        while (legendre(nr, p) != -1) ++nr;
        b.unit = nr;
      }
      js.blocks.push_back(b);
      alive.erase(std::find(alive.begin(), alive.end(), diag));
      continue;
    }
    if (p != 2) {
      // odd p: e_i += e_j moves the minimal valuation onto the diagonal
      int i = bi, j = bj;
      for (int t = 0; t < n; ++t) A[i][t] += A[j][t];
      for (int t = 0; t < n; ++t) A[t][i] += A[t][j];
      continue;
    }
    // p = 2, minimal valuation only off-diagonal: extract the 2x2 block
    int i = bi, j = bj;
    assert(i != j);
    Rat a = A[i][i], b2 = A[i][j], c2 = A[j][j];
    Rat det = a * c2 - b2 * b2;
    for (int k : alive) {
      if (k == i || k == j) continue;
      if (A[i][k] == 0 && A[j][k] == 0) continue;
      Rat al = (A[i][k] * c2 - A[j][k] * b2) / det;
      Rat be = (A[j][k] * a - A[i][k] * b2) / det;
      for (int t = 0; t < n; ++t) A[k][t] -= al * A[i][t] + be * A[j][t];
      for (int t = 0; t < n; ++t) A[t][k] -= al * A[t][i] + be * A[t][j];
    }
    i64 m = rat_val(b2, 2);
    Rat scale = 1;
    for (i64 t = 0; t < m; ++t) scale *= 2;
    Rat detU = det / (scale * scale);
    i64 dm = unit_mod(detU, 2, 8);
    JordanBlock blk;
    blk.scale = static_cast<int>(m);
    blk.unit = 1;
    blk.kind = (dm == 7) ? JordanBlock::Hyperbolic : JordanBlock::EvenSquare;
    assert(dm == 7 || dm == 3);
    js.blocks.push_back(blk);
    alive.erase(std::find(alive.begin(), alive.end(), i));
    alive.erase(std::find(alive.begin(), alive.end(), j));
  }
  std::sort(js.blocks.begin(), js.blocks.end());
  return js;
}

// ---------------------------------------------------------------------------
// epsilon invariants and anisotropy
// ---------------------------------------------------------------------------
namespace {

// diagonalization of Q over Q: entries 2 * Delta_i * Delta_{i-1} represent the
// square classes of the Q-value diagonal coefficients
std::vector<Int> rational_diagonal(const QuadraticForm& q) {
  int n = q.rank();
  std::vector<std::vector<Int>> big(n, std::vector<Int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) big[i][j] = q.gram(i, j);
  std::vector<Int> minors(n + 1);
  minors[0] = 1;
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<Int>> mk(k, std::vector<Int>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) mk[i][j] = big[i][j];
    minors[k] = det_int(mk);
  }
  std::vector<Int> diag(n);
  for (int i = 1; i <= n; ++i) diag[i - 1] = 2 * minors[i] * minors[i - 1];
  return diag;
}

bool is_padic_square(const Int& a, i64 p) {
  auto [u, v] = split_p(a, p);
  if (v % 2 != 0) return false;
  if (p == 2) return ((u % 8) + 8) % 8 == 1;
  return legendre(to_i64(((u % p) + p) % p), p) == 1;
}

}  // namespace

int epsilon_invariant(const QuadraticForm& q, i64 p) {
  auto d = rational_diagonal(q);
  int n = q.rank();
  int e = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e *= hilbert_symbol(d[i], d[j], p);
  return e;
}

LocalInvariants local_invariants(const QuadraticForm& q, i64 p) {
  LocalInvariants li;
  li.p = p;
  li.epsilon = epsilon_invariant(q, p);
  Int disc_q = 1;
  for (const auto& d : rational_diagonal(q)) disc_q *= d;
  li.square_disc = (p == 0) ? disc_q > 0 : is_padic_square(disc_q, p);
  int r = q.rank();
  switch (r) {
    case 0:
      li.anisotropic = true;
      break;
    case 1:
      li.anisotropic = true;
      break;
    case 2: {
      // isotropic iff -disc is a square
      li.anisotropic = (p == 0) ? true : !is_padic_square(-disc_q, p);
      break;
    }
    case 3: {
      // represents 0 nontrivially iff (-1,-disc)_p = epsilon_p
      li.anisotropic = (p == 0) ? true : hilbert_symbol(Int(-1), -disc_q, p) != li.epsilon;
      break;
    }
    case 4: {
      li.anisotropic =
          (p == 0) ? true
                   : (li.square_disc && li.epsilon == -hilbert_symbol(Int(-1), Int(-1), p));
      break;
    }
    default:
      li.anisotropic = (p == 0);  // definite at infinity, isotropic at all finite p
      break;
  }
  return li;
}

bool is_anisotropic(const QuadraticForm& q, i64 p) { return local_invariants(q, p).anisotropic; }

// ---------------------------------------------------------------------------
// local densities: good/zero/bad recursion on the Jordan blocks
// ---------------------------------------------------------------------------
namespace {

using Blocks = std::vector<JordanBlock>;

struct DensityEngine {
  i64 p;
  std::map<std::pair<Blocks, i64>, Rat> memo;

  int dim(const Blocks& b) const {
    int r = 0;
    for (auto& x : b) r += x.dim();
    return r;
  }
  int dim_at(const Blocks& b, int scale) const {
    int r = 0;
    for (auto& x : b)
      if (x.scale == scale) r += x.dim();
    return r;
  }
  int dim_ge(const Blocks& b, int scale) const {
    int r = 0;
    for (auto& x : b)
      if (x.scale >= scale) r += x.dim();
    return r;
  }

  Rat pow_p(i64 e) const {
    Rat r = 1;
    for (i64 i = 0; i < e; ++i) r *= p;
    for (i64 i = 0; i > e; --i) r /= p;
    return r;
  }

  // #{x in F_p^n : sum units[i] x_i^2 = c}, p odd
  Int count_quadric(const std::vector<i64>& units, i64 c) const {
    int n = static_cast<int>(units.size());
    c %= p;
    if (c < 0) c += p;
    if (n == 0) return c == 0 ? 1 : 0;
    i64 d = 1;
    for (i64 u : units) d = (unsigned __int128)d * ((u % p + p) % p) % p;
    Int pk = 1;
    for (int i = 0; i < n - 1; ++i) pk *= p;
    if (n % 2 == 1) {
      if (c == 0) return pk;
      i64 e = d;
      if (((n - 1) / 2) % 2 == 1) e = p - e % p;  // times (-1)^((n-1)/2)
      e = (unsigned __int128)e * c % p;
      Int half = 1;
      for (int i = 0; i < (n - 1) / 2; ++i) half *= p;
      return pk + half * legendre(e, p);
    }
    i64 e = d;
    if ((n / 2) % 2 == 1) e = (p - e % p) % p;
    Int half = 1;
    for (int i = 0; i < n / 2 - 1; ++i) half *= p;
    if (c == 0) return pk + (p - 1) * half * legendre(e, p);
    return pk - half * legendre(e, p);
  }

  // good-type density: solutions mod p (odd) or mod 8 (p=2) that admit a
  // unit coordinate in a scale-0 block
  Rat good(const Blocks& b, i64 m) const {
    if (p == 2) return good2(b, m);
    std::vector<i64> units;
    for (auto& x : b)
      if (x.scale == 0) units.push_back(x.unit);
    int n0 = static_cast<int>(units.size());
    if (n0 == 0) return 0;
    Int cnt = count_quadric(units, m % p);
    if (m % p == 0) cnt -= 1;
    return Rat(cnt) * pow_p(1 - n0);
  }

  Rat good2(const Blocks& b, i64 m) const {
    // per-block distributions of (value mod 8, good flag)
    i64 mm = ((m % 8) + 8) % 8;
    int r = dim(b);
    // dp over blocks: counts by (value mod 8, good?)
    std::array<std::array<Int, 2>, 8> dp{};
    dp[0][0] = 1;
    for (auto& blk : b) {
      std::array<std::array<Int, 2>, 8> nxt{};
      auto add = [&](i64 val, bool g, const Int& ways) {
        for (int v = 0; v < 8; ++v)
          for (int gg = 0; gg < 2; ++gg) {
            if (dp[v][gg] == 0) continue;
            int nv = static_cast<int>((v + val) % 8);
            nxt[nv][(gg || g) ? 1 : 0] += dp[v][gg] * ways;
          }
      };
      i64 sc = 1;
      for (int t = 0; t < std::min(blk.scale, 3); ++t) sc *= 2;
      if (blk.scale >= 3) sc = 8;
      if (blk.kind == JordanBlock::Unit) {
        for (i64 x = 0; x < 8; ++x) {
          i64 val = sc * blk.unit * x * x % 8;
          add(val, blk.scale == 0 && x % 2 == 1, 1);
        }
      } else {
        for (i64 x = 0; x < 8; ++x)
          for (i64 y = 0; y < 8; ++y) {
            i64 qv = (blk.kind == JordanBlock::Hyperbolic) ? x * y : x * x + x * y + y * y;
            i64 val = sc * qv % 8;
            add(val, blk.scale == 0 && (x % 2 == 1 || y % 2 == 1), 1);
          }
      }
      dp = nxt;
    }
    Rat denom = 1;
    for (int i = 0; i < 3 * (r - 1); ++i) denom *= 2;
    return Rat(dp[mm][1]) / denom;
  }

  Rat density(Blocks b, i64 m) {
    std::sort(b.begin(), b.end());
    auto key = std::make_pair(b, m);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int r = dim(b);
    int n0 = dim_at(b, 0), n1 = dim_at(b, 1);
    int n2p = r - n0 - n1;
    Rat total = good(b, m);
    if (m % (p * p) == 0) {
      total += pow_p(2 - r) * density(b, m / (p * p));
    }
    if (m % p == 0 && n1 > 0) {
      Blocks tb;
      for (auto x : b) {
        if (x.scale == 0)
          x.scale = 1;
        else if (x.scale == 1)
          x.scale = 0;
        else
          x.scale -= 1;
        tb.push_back(x);
      }
      std::sort(tb.begin(), tb.end());
      total += pow_p(1 - n0) * good(tb, m / p);
    }
    if (m % (p * p) == 0 && n2p > 0) {
      Blocks qb;
      for (auto x : b) {
        if (x.scale >= 2) x.scale -= 2;
        qb.push_back(x);
      }
      Rat t1 = density(qb, m / (p * p));
      Rat t2 = pow_p(-n2p) * density(b, m / (p * p));
      total += pow_p(2 - n0 - n1) * (t1 - t2);
    }
    memo.emplace(key, total);
    return total;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// LocalDensities engine
// ---------------------------------------------------------------------------
LocalDensities::LocalDensities(QuadraticForm q) : q_(std::move(q)) {
  if (q_.rank() % 2 == 0 && q_.rank() > 0) {
    i64 D = q_.character_disc();
    chi_f_ = fundamental_discriminant(D, chi_c_);
    b2chi_ = bernoulli2_chi(chi_f_);
  }
  if (q_.rank() > 0)
    for (auto& [p, e] : factorize(to_i64(2 * q_.disc()))) ramified_.push_back(p);
}

const JordanSplitting& LocalDensities::splitting(i64 p) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = jordan_.find(p);
  if (it == jordan_.end()) it = jordan_.emplace(p, jordan_splitting(q_, p)).first;
  return it->second;
}

Rat LocalDensities::density_class(i64 p, int ord, i64 unit) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = class_cache_.find({p, ord, unit});
    if (it != class_cache_.end()) return it->second;
  }
  const JordanSplitting& js = splitting(p);
  DensityEngine eng;
  eng.p = p;
  i64 m = unit;
  for (int i = 0; i < ord; ++i) m = checked_mul(m, p);
  Rat val = eng.density(js.blocks, m);
  std::lock_guard<std::mutex> lk(mu_);
  class_cache_[{p, ord, unit}] = val;
  return val;
}

Rat LocalDensities::density(i64 p, i64 m) const {
  if (m <= 0) throw Error(ErrorCode::NonPositiveArgument, "density needs m >= 1");
  i64 v = valuation(m, p);
  i64 u = m;
  for (i64 i = 0; i < v; ++i) u /= p;
  i64 cls;
  if (p == 2)
    cls = u % 8;
  else {
    cls = legendre(u % p, p) == 1 ? 1 : 0;
    if (cls == 1)
      cls = 1;
    else {
      i64 nr = 2;
      while (legendre(nr, p) != -1) ++nr;
      cls = nr;
    }
  }
  return density_class(p, static_cast<int>(v), cls);
}

double LocalDensities::archimedean(i64 n) const {
  int r = q_.rank();
  if (n < 1) throw Error(ErrorCode::NonPositiveArgument, "archimedean density needs n >= 1");
  // (2 pi)^{r/2} n^{r/2 - 1} / (Gamma(r/2) sqrt(det A))
  double g = std::tgamma(r / 2.0);
  return std::pow(2 * M_PI, r / 2.0) * std::pow(static_cast<double>(n), r / 2.0 - 1.0) /
         (g * std::sqrt(to_double(Rat(q_.disc()))));
}

bool LocalDensities::locally_represents(i64 n) const {
  if (n < 0) return false;
  if (n == 0) return true;
  for (i64 p : ramified_)
    if (density(p, n) <= 0) return false;
  for (auto& [p, e] : factorize(n)) {
    (void)e;
    if (std::find(ramified_.begin(), ramified_.end(), p) == ramified_.end() &&
        density(p, n) <= 0)
      return false;
  }
  return true;
}

SquareclassProfile LocalDensities::missed_classes() const {
  // modulus 8 * prod_{p | disc, p odd} p^2
  i64 M = 8;
  std::vector<i64> odd_ramified;
  for (i64 p : ramified_)
    if (p > 2) {
      odd_ramified.push_back(p);
      M = checked_mul(M, p * p);
    }
  if (M > (i64(1) << 24))
    throw Error(ErrorCode::BudgetExceeded, "squareclass modulus too large: " + std::to_string(M));
  SquareclassProfile prof;
  prof.modulus = M;
  for (i64 a = 1; a < M; ++a) {
    // a class mod M pins the (ord, unit) data at every ramified prime only
    // when ord_2(a) = 0 and ord_p(a) <= 1; unramified primes cannot obstruct
    // an isotropic form of rank >= 3
    bool stable = (a % 2 == 1);
    bool rep = true;
    for (i64 p : odd_ramified) {
      i64 v = a % p == 0 ? valuation(a, p) : 0;
      if (v >= 2) stable = false;
    }
    if (!stable) {
      prof.mixed.push_back(a);
      continue;
    }
    for (i64 p : ramified_)
      if (density(p, a) <= 0) rep = false;
    if (q_.rank() < 3 && rep) rep = locally_represents(a);
    if (!rep) prof.missed.push_back(a);
  }
  return prof;
}

Rat LocalDensities::eisenstein_rational(i64 n) const {
  if (q_.rank() != 4) throw Error(ErrorCode::WrongRank, "eisenstein coefficients need rank 4");
  if (n < 0) throw Error(ErrorCode::NonPositiveArgument, "n >= 0 required");
  if (n == 0) return 1;
  // a_E(n) = 4 n (f/c) / B_{2,chi} * prod_{p | 2 D n} beta_p(n)/(1 - chi(p)/p^2)
  Rat prod = Rat(4 * chi_f_, 1) / (Rat(chi_c_) * b2chi_) * n;
  std::vector<i64> ps = ramified_;
  for (auto& [p, e] : factorize(n))
    if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  for (i64 p : ps) {
    int chi = kronecker(chi_f_, p);
    Rat denom = Rat(1) - Rat(chi, p * p);
    prod *= density(p, n) / denom;
  }
  return prod;
}

Rat LocalDensities::eisenstein_lower_constant() const {
  if (q_.rank() != 4) throw Error(ErrorCode::WrongRank, "eisenstein constant needs rank 4");
  Rat c = Rat(4 * chi_f_, 1) / (Rat(chi_c_) * b2chi_);
  for (i64 p : ramified_) {
    int chi = kronecker(chi_f_, p);
    Rat denom = Rat(1) - Rat(chi, p * p);
    std::optional<Rat> best;
    auto consider = [&](int ord, i64 unit) {
      Rat b = density_class(p, ord, unit) / denom;
      if (b > 0 && (!best || b < *best)) best = b;
    };
    if (p == 2) {
      for (i64 u : {1, 3, 5, 7}) consider(0, u);
    } else {
      i64 nr = 2;
      while (legendre(nr, p) != -1) ++nr;
      for (int ord : {0, 1})
        for (i64 u : {i64(1), nr}) consider(ord, u);
    }
    if (!best)
      throw Error(ErrorCode::Unresolvable, "no locally represented class at p=" + std::to_string(p));
    c *= *best;
  }
  return c;
}

Rat bernoulli2_chi(i64 f) {
  if (f == 1) return Rat(1, 6);
  Int s = 0;
  for (i64 a = 1; a <= f; ++a) s += Int(kronecker(f, a)) * a * a;
  return Rat(s) / f;
}

// ---------------------------------------------------------------------------
// free wrappers
// ---------------------------------------------------------------------------
Rat local_density(const QuadraticForm& q, i64 n, i64 p) {
  return LocalDensities(q).density(p, n);
}
double archimedean_density(const QuadraticForm& q, i64 n) {
  if (q.rank() != 4) throw Error(ErrorCode::WrongRank, "archimedean_density needs rank 4");
  return LocalDensities(q).archimedean(n);
}
bool locally_represents(const QuadraticForm& q, i64 n) {
  return LocalDensities(q).locally_represents(n);
}
SquareclassProfile locally_missed_classes(const QuadraticForm& q) {
  return LocalDensities(q).missed_classes();
}
Rat eisenstein_coefficient(const QuadraticForm& q, i64 n) {
  return LocalDensities(q).eisenstein_rational(n);
}
Rat eisenstein_lower_constant(const QuadraticForm& q) {
  return LocalDensities(q).eisenstein_lower_constant();
}

}  // namespace oddrep
