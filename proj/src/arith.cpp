#include "oddrep/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace oddrep {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::OddDiagonal: return "OddDiagonal";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::SmallLevel: return "SmallLevel";
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::NonFundamentalDiscriminant: return "NonFundamentalDiscriminant";
    case ErrorCode::TailDominates: return "TailDominates";
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::NoCoverFound: return "NoCoverFound";
    case ErrorCode::NoRegularEmbedding: return "NoRegularEmbedding";
    case ErrorCode::QueueBudgetExceeded: return "QueueBudgetExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Unresolvable: return "Unresolvable";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

i64 isqrt64(i64 n) {
  if (n < 0) throw Error(ErrorCode::NonPositiveArgument, "isqrt of negative");
  if (n == 0) return 0;
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square64(i64 n) {
  if (n < 0) return false;
  i64 r = isqrt64(n);
  return r * r == n;
}

i64 gcd64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }
i64 lcm64(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

namespace {
std::vector<i64> g_primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
i64 g_sieve_limit = 31;
std::mutex g_prime_mutex;

void extend_primes(i64 limit) {
  if (limit <= g_sieve_limit) return;
  limit = std::max<i64>(limit, 2 * g_sieve_limit);
  std::vector<bool> comp(static_cast<size_t>(limit) + 1, false);
  for (i64 p = 2; p * p <= limit; ++p)
    if (!comp[p])
      for (i64 q = p * p; q <= limit; q += p) comp[q] = true;
  g_primes.clear();
  for (i64 p = 2; p <= limit; ++p)
    if (!comp[p]) g_primes.push_back(p);
  g_sieve_limit = limit;
}
}  // namespace

const std::vector<i64>& small_primes(i64 at_least) {
  std::lock_guard<std::mutex> lk(g_prime_mutex);
  extend_primes(at_least);
  return g_primes;
}

bool is_prime64(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // deterministic Miller-Rabin for 64-bit
  auto mulmod = [](u64 a, u64 b, u64 m) -> u64 { return (unsigned __int128)a * b % m; };
  auto powmod = [&](u64 a, u64 e, u64 m) -> u64 {
    u64 r = 1;
    a %= m;
    while (e) {
      if (e & 1) r = mulmod(r, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return r;
  };
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (a % n == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == (u64)n - 1) continue;
    bool witness = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == (u64)n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 0) n = -n;
  if (n == 0) throw Error(ErrorCode::NonPositiveArgument, "factorize(0)");
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) n /= p, ++e;
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int omega64(i64 n) { return static_cast<int>(factorize(n).size()); }

i64 divisor_count(i64 n) {
  i64 d = 1;
  for (auto& [p, e] : factorize(n)) d *= (e + 1);
  return d;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  for (auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

i64 valuation(i64 n, i64 p) {
  if (n == 0) throw Error(ErrorCode::NonPositiveArgument, "valuation of 0");
  if (n < 0) n = -n;
  i64 v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

std::vector<int32_t> spf_sieve(i64 n) {
  std::vector<int32_t> spf(static_cast<size_t>(n) + 1, 0);
  for (i64 i = 2; i <= n; ++i) {
    if (spf[i] == 0)
      for (i64 j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = static_cast<int32_t>(i);
  }
  return spf;
}

int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int s = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) s = -1;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    i64 am = ((a % 8) + 8) % 8;
    if (am == 3 || am == 5) s = -s;
  }
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 nm = n % 8;
      if (nm == 3 || nm == 5) s = -s;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) s = -s;
    a %= n;
  }
  return n == 1 ? s : 0;
}

i64 fundamental_discriminant(i64 D, i64& c) {
  if (D == 0) throw Error(ErrorCode::NonPositiveArgument, "discriminant 0");
  i64 m = ((D % 4) + 4) % 4;
  if (m != 0 && m != 1)
    throw Error(ErrorCode::InvalidCharacter, "discriminant not 0 or 1 mod 4");
  i64 d = D;
  c = 1;
  for (auto& [p, e] : factorize(D)) {
    while (e >= 2) {
      d /= p * p;
      c *= p;
      e -= 2;
    }
  }
  i64 dm = ((d % 4) + 4) % 4;
  if (dm != 1) {
    // need the factor 4 back in the discriminant
    if (c % 2 != 0)
      throw Error(ErrorCode::InvalidCharacter, "no fundamental discriminant divides");
    d *= 4;
    c /= 2;
  }
  return d;
}

bool is_fundamental_discriminant(i64 D) {
  if (D == 0) return false;
  if (D == 1) return true;
  i64 c;
  try {
    i64 f = fundamental_discriminant(D, c);
    return f == D && c == 1;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace oddrep
