#ifndef ODDREP_ARITH_HPP
#define ODDREP_ARITH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oddrep {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// ---------------------------------------------------------------------------
// error type shared by the whole library
// ---------------------------------------------------------------------------
enum class ErrorCode {
  NotSymmetric,
  OddDiagonal,
  NotPositiveDefinite,
  WrongRank,
  NonPositiveArgument,
  SmallLevel,
  InvalidCharacter,
  NonFundamentalDiscriminant,
  TailDominates,
  NotSquarefree,
  NoCoverFound,
  NoRegularEmbedding,
  QueueBudgetExceeded,
  BudgetExceeded,
  Unresolvable,
  Overflow,
  ParseError,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

const char* error_code_name(ErrorCode c);

// ---------------------------------------------------------------------------
// checked 64-bit arithmetic
// ---------------------------------------------------------------------------
inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in multiply");
  return r;
}
inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer overflow in add");
  return r;
}

// floor(sqrt(n)) for n >= 0
i64 isqrt64(i64 n);
// true iff n is a perfect square
bool is_square64(i64 n);

i64 gcd64(i64 a, i64 b);
i64 lcm64(i64 a, i64 b);

// ---------------------------------------------------------------------------
// primes and factorization (trial division backed by a cached sieve)
// ---------------------------------------------------------------------------
const std::vector<i64>& small_primes(i64 at_least = 1000);
bool is_prime64(i64 n);

// prime -> exponent, ascending primes
std::vector<std::pair<i64, int>> factorize(i64 n);

int omega64(i64 n);           // number of distinct prime factors
i64 divisor_count(i64 n);     // d(n)
bool is_squarefree(i64 n);
i64 valuation(i64 n, i64 p);  // ord_p(n), n != 0

// smallest-prime-factor sieve for bulk factorization of 1..n
std::vector<int32_t> spf_sieve(i64 n);

// Kronecker symbol (a|n), the usual extension of Jacobi
int kronecker(i64 a, i64 n);

// Fundamental discriminant f with D = f*c^2 (requires D = 0 or 1 mod 4, D != 0).
// Returns f and sets c.
i64 fundamental_discriminant(i64 D, i64& c);
bool is_fundamental_discriminant(i64 D);

}  // namespace oddrep

#endif
