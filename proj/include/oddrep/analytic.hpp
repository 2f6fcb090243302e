#ifndef ODDREP_ANALYTIC_HPP
#define ODDREP_ANALYTIC_HPP

#include <functional>
#include <string>
#include <vector>

#include "oddrep/form.hpp"
#include "oddrep/local.hpp"

namespace oddrep {

// [SL_2(Z) : Gamma_0(N)] = N prod_{p|N} (1 + 1/p)
i64 gamma0_index(i64 N);

// dim S_2(Gamma_0(N), chi) for the quadratic character of fundamental
// discriminant chi_disc (chi_disc = 1 means trivial character)
i64 dim_s2(i64 N, i64 chi_disc);

// zero-free region edge: beta = 1 - (5 - 2 sqrt(6))/(4 log N - 11); needs N >= 44
double zero_free_beta(i64 N);

struct AdjointBound {
  double value;
  bool fallback_only;  // true when only 1/(26 log N) was available (N < 167)
  double param_a;      // optimizer parameter (0 when fallback)
  double param_c;      // 1.6 or 1.64 (0 when fallback)
};
AdjointBound adjoint_lower_bound(i64 N);

// B = adjoint_lower_bound(N) * 3 / (8 pi^4 prod_{p|N}(1 + 1/p))
double newform_petersson_lower(i64 N);

// Dirichlet coefficients b(n) = sum_{m|n, n/m square} 2^{omega(gcd(m,N))} a(m)^2 / m
std::vector<double> rs_coefficients(const std::vector<double>& a, i64 N, i64 bound);

// dual cusp data: a_{C*}(n) = r_{Q*}(n) - a_{E*}(n), exact rationals
struct DualCuspData {
  QuadraticForm dual;
  i64 bound;
  std::vector<i64> r;       // r_{Q*}(0..bound)
  std::vector<Rat> eis;     // a_{E*}(0..bound)
  std::vector<Rat> cusp;    // a_{C*}(0..bound)
};
DualCuspData dual_cusp_coefficients(const QuadraticForm& q, i64 bound = 0 /* 0 => 15N */);

struct PeterssonBound {
  i64 level = 0;
  i64 truncation = 0;        // B = multiplier * N
  double explicit_part = 0;  // sum over n d^2 <= B, scaled by 1/[SL2:Gamma0(N)]
  double inner_tail = 0;     // n <= B, d large (coefficient-known, nonnegative)
  double c1 = 0;             // coefficient-independent upper part: explicit + inner tail
  double c2 = 0;             // coefficient of C_{Q*}^2 in the n > B tail
  double err = 0;            // accumulated floating-point error bound on explicit_part
  // interval for <C, C> = N <C*, C*>; hi_c2_pending excludes the c2 term
  double lo = 0;
  double hi_without_c2 = 0;
};
PeterssonBound petersson_norm_C(const QuadraticForm& q, int trunc_multiplier = 15);

struct CuspConstantCertificate {
  i64 level = 0;
  i64 u = 0;                 // dim S_2(Gamma_0(N), chi)
  double newform_lower = 0;  // B
  PeterssonBound petersson;
  double norm_lo = 0, norm_hi = 0;  // interval for <C,C>
  double cq = 0;             // bound on C_Q
  Rat ce;                    // Eisenstein lower constant
  double f4_threshold = 0;   // F = C_Q / C_E
  bool cm_caveat = true;     // non-CM Petersson lower bound applied to all newforms
  std::string to_json() const;
};
CuspConstantCertificate cusp_constant(const QuadraticForm& q, int trunc_multiplier = 15);

// F_4(n) = sqrt(n)/d(n) * prod_{p | n, p coprime to N, chi(p) = -1} (p-1)/(p+1)
double f4_value(i64 n, i64 N, i64 chi_disc);

struct F4Stats {
  i64 max_candidate = 0;
  int max_prime_factors = 0;
  u64 count = 0;  // filled by the full enumeration only
};

// complete, duplicate-free stream of odd squarefree n with F_4(n) <= F;
// visit(n) — order is depth-first, not ascending. max_value < 0 means no cap.
F4Stats f4_candidates(double F, i64 N, i64 chi_disc, i64 max_value,
                      const std::function<void(i64)>& visit);

// branch-and-bound: largest candidate and the prime-factor cap, no enumeration
F4Stats f4_stats(double F, i64 N, i64 chi_disc);

}  // namespace oddrep

#endif
