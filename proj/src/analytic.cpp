#include "oddrep/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "oddrep/bessel.hpp"
#include "oddrep/theta.hpp"

namespace oddrep {

i64 gamma0_index(i64 N) {
  i64 idx = N;
  for (auto& [p, e] : factorize(N)) {
    (void)e;
    idx = idx / p * (p + 1);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Cohen-Oesterle dimension formula, weight 2, quadratic character
// ---------------------------------------------------------------------------
i64 dim_s2(i64 N, i64 chi_disc) {
  if (N < 1) throw Error(ErrorCode::InvalidCharacter, "level must be positive");
  i64 f = chi_disc == 1 ? 1 : 0;
  if (chi_disc != 1) {
    i64 c;
    f = fundamental_discriminant(chi_disc, c);
    if (f != chi_disc)
      throw Error(ErrorCode::InvalidCharacter, "character discriminant not fundamental");
    if (f < 0) throw Error(ErrorCode::InvalidCharacter, "odd character has no weight-2 forms");
  }
  if (f != 1 && N % f != 0)
    throw Error(ErrorCode::InvalidCharacter, "conductor does not divide level");
  auto chi = [&](i64 x) { return f == 1 ? (gcd64(x, N) == 1 ? 1 : 0) : kronecker(f, x); };

  // (k-1)/12 * [SL2:Gamma0(N)]
  Rat dim = Rat(gamma0_index(N), 12);
  // - 1/2 prod lambda(r_p, s_p, p)
  Rat lam = 1;
  for (auto& [p, r] : factorize(N)) {
    i64 s = (f != 1 && f % p == 0) ? valuation(f, p) : 0;
    Rat l;
    if (2 * s <= r) {
      if (r % 2 == 0) {
        i64 ph = 1;
        for (i64 i = 0; i < r / 2; ++i) ph *= p;
        l = Rat(ph + ph / p);
      } else {
        i64 ph = 1;
        for (i64 i = 0; i < (r - 1) / 2; ++i) ph *= p;
        l = Rat(2 * ph);
      }
    } else {
      i64 ph = 1;
      for (i64 i = 0; i < r - s; ++i) ph *= p;
      l = Rat(2 * ph);
    }
    lam *= l;
  }
  dim -= lam / 2;
  // elliptic terms: eps4 over x^2+1 = 0, eps3 over x^2+x+1 = 0 (mod N)
  Rat eps4 = 0, eps3 = 0;
  for (i64 x = 0; x < N; ++x) {
    if ((x * x + 1) % N == 0) eps4 += chi(x);
    if ((x * x + x + 1) % N == 0) eps3 += chi(x);
  }
  dim -= eps4 / 4;
  dim -= eps3 / 3;
  // Cohen-Oesterle computes dim S_2 - dim M_0; M_0 is the constants for
  // trivial character
  if (f == 1) dim += 1;
  if (boost::multiprecision::denominator(dim) != 1)
    throw Error(ErrorCode::InvalidCharacter, "dimension formula did not produce an integer");
  return to_i64(boost::multiprecision::numerator(dim));
}

// ---------------------------------------------------------------------------
// Petersson lower bound for newforms
// ---------------------------------------------------------------------------
double zero_free_beta(i64 N) {
  if (N < 44) throw Error(ErrorCode::SmallLevel, "zero-free region needs N >= 44");
  return 1.0 - (5.0 - 2.0 * std::sqrt(6.0)) / (4.0 * std::log(static_cast<double>(N)) - 11.0);
}

AdjointBound adjoint_lower_bound(i64 N) {
  if (N < 3) throw Error(ErrorCode::SmallLevel, "level too small");
  AdjointBound out;
  out.value = 1.0 / (26.0 * std::log(static_cast<double>(N)));
  out.fallback_only = true;
  out.param_a = 0;
  out.param_c = 0;
  if (N < 167) return out;

  double beta = zero_free_beta(N);
  double lnN = std::log(static_cast<double>(N));
  const double d = 8.35176e-3;
  for (double c : {1.64, 1.6}) {
    double A = (1.0 / (beta + 1.5)) *
               (4.0 - (std::log(1.0 - beta) + std::log(c) - std::log(d) - std::log(2.5)) / lnN);
    double x = std::exp(A * lnN);
    bool valid = (c == 1.64) ? (x >= 330775.0) : (x >= 3989.0 && x < 330775.0);
    if (!valid) continue;
    double val = (1.0 - beta) * (c * std::pow(static_cast<double>(N), -A * (1.0 - beta)) -
                                 d * std::pow(static_cast<double>(N), -(2.5 * A - 4.0)));
    if (val > out.value) {
      out.value = val;
      out.fallback_only = false;
      out.param_a = A;
      out.param_c = c;
    }
  }
  return out;
}

double newform_petersson_lower(i64 N) {
  if (N < 44) throw Error(ErrorCode::SmallLevel, "newform bound needs N >= 44");
  double prod = 1.0;
  for (auto& [p, e] : factorize(N)) {
    (void)e;
    prod *= 1.0 + 1.0 / static_cast<double>(p);
  }
  return adjoint_lower_bound(N).value * 3.0 / (8.0 * std::pow(M_PI, 4) * prod);
}

// ---------------------------------------------------------------------------
// Rankin-Selberg Dirichlet coefficients
// ---------------------------------------------------------------------------
std::vector<double> rs_coefficients(const std::vector<double>& a, i64 N, i64 bound) {
  if (bound + 1 > static_cast<i64>(a.size()))
    throw Error(ErrorCode::NonPositiveArgument, "coefficient table too short");
  std::vector<double> b(static_cast<size_t>(bound) + 1, 0.0);
  for (i64 m = 1; m <= bound; ++m) {
    if (a[static_cast<size_t>(m)] == 0.0) continue;
    double w = std::pow(2.0, omega64(gcd64(m, N))) * a[static_cast<size_t>(m)] *
               a[static_cast<size_t>(m)] / static_cast<double>(m);
    for (i64 d = 1; m * d * d <= bound; ++d) b[static_cast<size_t>(m * d * d)] += w;
  }
  return b;
}

// ---------------------------------------------------------------------------
// dual cusp coefficients
// ---------------------------------------------------------------------------
DualCuspData dual_cusp_coefficients(const QuadraticForm& q, i64 bound) {
  if (q.rank() != 4) throw Error(ErrorCode::WrongRank, "dual cusp data needs rank 4");
  if (!is_fundamental_discriminant(q.disc64()))
    throw Error(ErrorCode::NonFundamentalDiscriminant,
                "discriminant " + std::to_string(q.disc64()) + " is not fundamental");
  DualCuspData out;
  out.dual = q.dual();
  i64 N = q.level();
  out.bound = bound > 0 ? bound : 15 * N;
  ThetaSeries th = theta_series(out.dual, out.bound);
  out.r = th.coeff;
  LocalDensities ld(out.dual);
  out.eis.resize(out.r.size());
  out.cusp.resize(out.r.size());
  // bulk smallest-prime-factor sieve for the per-n density product
  auto spf = spf_sieve(out.bound);
  i64 f = ld.char_fundamental();
  Rat pref;
  {
    i64 c;
    i64 ff = fundamental_discriminant(out.dual.character_disc(), c);
    pref = Rat(4 * ff, 1) / (Rat(c) * bernoulli2_chi(ff));
  }
  std::vector<i64> ramified;
  for (auto& [p, e] : factorize(to_i64(2 * out.dual.disc()))) ramified.push_back(p);
  out.eis[0] = 1;
  out.cusp[0] = 0;
  for (i64 n = 1; n <= out.bound; ++n) {
    Rat prod = pref * n;
    for (i64 p : ramified) prod *= ld.density(p, n) / (Rat(1) - Rat(kronecker(f, p), p * p));
    i64 m = n;
    while (m > 1) {
      i64 p = spf[m];
      while (m % p == 0) m /= p;
      if (std::find(ramified.begin(), ramified.end(), p) == ramified.end())
        prod *= ld.density(p, n) / (Rat(1) - Rat(kronecker(f, p), p * p));
    }
    out.eis[static_cast<size_t>(n)] = prod;
    out.cusp[static_cast<size_t>(n)] = Rat(out.r[static_cast<size_t>(n)]) - prod;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Petersson norm of the cusp part
// ---------------------------------------------------------------------------
PeterssonBound petersson_norm_C(const QuadraticForm& q, int trunc_multiplier) {
  i64 N = q.level();
  PeterssonBound pb;
  pb.level = N;
  pb.truncation = static_cast<i64>(trunc_multiplier) * N;
  DualCuspData dc = dual_cusp_coefficients(q, pb.truncation);
  i64 B = pb.truncation;
  double idx = static_cast<double>(gamma0_index(N));

  double expl = 0.0, err = 0.0, inner = 0.0;
  for (i64 n = 1; n <= B; ++n) {
    Rat ac = dc.cusp[static_cast<size_t>(n)];
    if (ac == 0) continue;
    double a = to_double(ac);
    double w = std::pow(2.0, omega64(gcd64(n, N))) * a * a / static_cast<double>(n);
    double root = std::sqrt(static_cast<double>(n) / static_cast<double>(N));
    i64 dmax = isqrt64(B / n);
    double s = 0.0, sabs = 0.0;
    for (i64 d = 1; d <= dmax; ++d) {
      double v = psi_weight(d * root);
      s += v;
      sabs += std::fabs(v);
    }
    expl += w * s;
    err += std::fabs(w) * sabs * 2e-12;
    // d > dmax tail: psi(y) <= 6 sqrt2 y^{3/2} e^{-4 pi y}, d^{3/2} <= d^2/sqrt(a)
    i64 a0 = dmax + 1;
    double c = 4 * M_PI * root;
    double t = std::exp(-c);
    double tail = 6.0 * std::sqrt(2.0) * std::pow(root, 1.5) / std::sqrt(static_cast<double>(a0)) *
                  geometric_d2_tail(t, a0);
    inner += w * tail;
  }
  pb.explicit_part = expl / idx;
  pb.err = err / idx;
  pb.inner_tail = inner / idx;
  pb.c1 = pb.explicit_part + pb.inner_tail + pb.err;

  // n > B tail: coefficient of C_{Q*}^2
  double T = static_cast<double>(trunc_multiplier);
  double s0 = std::sqrt(T);
  double a4pi = 4 * M_PI;
  double integral = std::exp(-a4pi * s0) *
                    (std::pow(s0, 4) / a4pi + 4 * std::pow(s0, 3) / std::pow(a4pi, 2) +
                     12 * s0 * s0 / std::pow(a4pi, 3) + 24 * s0 / std::pow(a4pi, 4) +
                     24 / std::pow(a4pi, 5));
  double e_t = 2.0 * integral;  // integral_{TN}^inf x^{3/2} e^{-4 pi sqrt(x/N)} dx = E(T) N^{5/2}
  double cconst = 6.0 * std::sqrt(2.0) * 7.0609 * 1.000012;
  pb.c2 = cconst * std::pow(2.0, omega64(N)) * std::pow(1.0 + 1.0 / static_cast<double>(B), 1.5) *
          e_t * std::pow(static_cast<double>(N), 1.75) / idx;

  pb.lo = std::max(0.0, static_cast<double>(N) * (pb.explicit_part - pb.err));
  pb.hi_without_c2 = static_cast<double>(N) * pb.c1;
  return pb;
}

// ---------------------------------------------------------------------------
// cusp constant certificate
// ---------------------------------------------------------------------------
CuspConstantCertificate cusp_constant(const QuadraticForm& q, int trunc_multiplier) {
  if (q.rank() != 4) throw Error(ErrorCode::WrongRank, "cusp constant needs rank 4");
  CuspConstantCertificate cert;
  cert.level = q.level();
  i64 N = cert.level;
  if (N < 167)
    throw Error(ErrorCode::SmallLevel, "certificate path needs N >= 167");
  i64 c;
  i64 f = fundamental_discriminant(q.character_disc(), c);
  cert.u = dim_s2(N, f);
  cert.newform_lower = newform_petersson_lower(N);
  cert.petersson = petersson_norm_C(q, trunc_multiplier);
  double B = cert.newform_lower;
  double u = static_cast<double>(cert.u);
  if (B <= u * cert.petersson.c2)
    throw Error(ErrorCode::TailDominates,
                "newform lower bound below tail coefficient; increase the truncation");
  double cqstar_sq = u * cert.petersson.c1 / (B - u * cert.petersson.c2);
  double cqstar = std::sqrt(cqstar_sq);
  cert.cq = std::sqrt(static_cast<double>(N)) * cqstar;
  cert.norm_lo = cert.petersson.lo;
  cert.norm_hi = cert.petersson.hi_without_c2 +
                 static_cast<double>(N) * cert.petersson.c2 * cqstar_sq;
  LocalDensities ld(q);
  cert.ce = ld.eisenstein_lower_constant();
  cert.f4_threshold = cert.cq / to_double(cert.ce);
  cert.cm_caveat = true;
  return cert;
}

std::string CuspConstantCertificate::to_json() const {
  nlohmann::json j;
  j["level"] = level;
  j["u"] = u;
  j["u_provenance"] = "dim S_2(Gamma_0(N), chi), Cohen-Oesterle";
  j["newform_lower"] = newform_lower;
  j["newform_lower_provenance"] = "adjoint L-value bound * 3/(8 pi^4 prod(1+1/p))";
  j["truncation"] = petersson.truncation;
  j["c1"] = petersson.c1;
  j["c2"] = petersson.c2;
  j["explicit_part"] = petersson.explicit_part;
  j["inner_tail"] = petersson.inner_tail;
  j["fp_error"] = petersson.err;
  j["norm_lo"] = norm_lo;
  j["norm_hi"] = norm_hi;
  j["norm_provenance"] = "<C,C> = N <C*,C*>, explicit psi sum plus certified tails";
  j["cq"] = cq;
  j["cq_provenance"] = "C_Q = sqrt(N u <C*,C*> / B_newform)";
  j["ce_num"] = boost::multiprecision::numerator(ce).convert_to<i64>();
  j["ce_den"] = boost::multiprecision::denominator(ce).convert_to<i64>();
  j["ce_provenance"] = "class-minimized Eisenstein lower constant";
  j["f4_threshold"] = f4_threshold;
  j["cm_caveat"] = cm_caveat;
  return j.dump();
}

// ---------------------------------------------------------------------------
// F4 machinery
// ---------------------------------------------------------------------------
namespace {

double f4_prime_weight(i64 p, i64 N, i64 f) {
  double w = std::sqrt(static_cast<double>(p)) / 2.0;
  if (N % p != 0 && kronecker(f, p) == -1)
    w *= static_cast<double>(p - 1) / static_cast<double>(p + 1);
  return w;
}

// lower bound for the weight of any prime >= p
double f4_weight_floor(i64 p) {
  return std::sqrt(static_cast<double>(p)) / 2.0 * static_cast<double>(p - 1) /
         static_cast<double>(p + 1);
}

}  // namespace

double f4_value(i64 n, i64 N, i64 chi_disc) {
  if (n < 1 || !is_squarefree(n))
    throw Error(ErrorCode::NotSquarefree, "F_4 defined on squarefree n");
  i64 c;
  i64 f = chi_disc == 1 ? 1 : fundamental_discriminant(chi_disc, c);
  double v = std::sqrt(static_cast<double>(n)) / static_cast<double>(divisor_count(n));
  for (auto& [p, e] : factorize(n)) {
    (void)e;
    if (N % p != 0 && kronecker(f, p) == -1)
      v *= static_cast<double>(p - 1) / static_cast<double>(p + 1);
  }
  return v;
}

namespace {

// primes usable at all: w(p) * (shrink available from 3,5,7) <= F
i64 f4_prime_pool_limit(double F, i64 N, i64 f) {
  double slack = 1.0;
  for (i64 p : {3, 5, 7}) {
    double w = f4_prime_weight(p, N, f);
    if (w < 1) slack *= w;
  }
  double root = 2.0 * F / slack;
  return static_cast<i64>(root * root + 4.0 * root) + 100;
}

// shrink still available from sub-1 weights at primes > p
double f4_remaining_slack(i64 p, i64 N, i64 f) {
  double s = 1.0;
  for (i64 q : {3, 5, 7})
    if (q > p) {
      double wq = f4_prime_weight(q, N, f);
      if (wq < 1) s *= wq;
    }
  return s;
}

}  // namespace

F4Stats f4_candidates(double F, i64 N, i64 chi_disc, i64 max_value,
                      const std::function<void(i64)>& visit) {
  if (F < 1) throw Error(ErrorCode::NonPositiveArgument, "F must be at least 1");
  i64 c;
  i64 f = chi_disc == 1 ? 1 : fundamental_discriminant(chi_disc, c);
  const auto& primes = small_primes(f4_prime_pool_limit(F, N, f) + 1);
  F4Stats st;
  st.count = 1;  // n = 1
  st.max_candidate = 1;
  st.max_prime_factors = 0;
  visit(1);
  std::function<void(size_t, i64, double, int)> rec = [&](size_t idx, i64 n, double W,
                                                          int nf) {
    for (size_t i = idx; i < primes.size(); ++i) {
      i64 p = primes[i];
      if (p == 2) continue;
      double w = f4_prime_weight(p, N, f);
      double rem = f4_remaining_slack(p, N, f);
      if (W * w * rem > F) {
        // no prime >= p can extend once even the weight floor fails
        if (W * f4_weight_floor(p) * rem > F) break;
        continue;
      }
      if (max_value > 0 && n > max_value / p) continue;
      i64 np = n * p;
      double Wp = W * w;
      if (Wp <= F) {
        st.count += 1;
        if (np > st.max_candidate) st.max_candidate = np;
        if (nf + 1 > st.max_prime_factors) st.max_prime_factors = nf + 1;
        visit(np);
      }
      rec(i + 1, np, Wp, nf + 1);
    }
  };
  rec(0, 1, 1.0, 0);
  return st;
}

F4Stats f4_stats(double F, i64 N, i64 chi_disc) {
  if (F < 1) throw Error(ErrorCode::NonPositiveArgument, "F must be at least 1");
  i64 cc;
  i64 f = chi_disc == 1 ? 1 : fundamental_discriminant(chi_disc, cc);
  const auto& primes = small_primes(f4_prime_pool_limit(F, N, f) + 1);
  auto weight = [&](size_t i) { return f4_prime_weight(primes[i], N, f); };
  F4Stats st;
  st.max_candidate = 1;
  st.max_prime_factors = 0;
  // greatest depth reachable from index idx with weight budget R
  auto max_depth = [&](size_t idx, double R) {
    int k = 0;
    double W = 1.0;
    for (size_t i = idx; i < primes.size(); ++i) {
      if (primes[i] == 2) continue;
      W *= weight(i);
      if (W > R) break;
      ++k;
    }
    return k;
  };
  std::function<void(size_t, double, int)> depth_rec = [&](size_t idx, double R, int nf) {
    if (nf > st.max_prime_factors) st.max_prime_factors = nf;
    for (size_t i = idx; i < primes.size(); ++i) {
      i64 p = primes[i];
      if (p == 2) continue;
      double w = weight(i);
      double rem = f4_remaining_slack(p, N, f);
      if (w * rem > R) {
        if (f4_weight_floor(p) * rem > R) break;
        continue;
      }
      if (nf + 1 + max_depth(i + 1, R / w) <= st.max_prime_factors) continue;
      depth_rec(i + 1, R / w, nf + 1);
    }
  };
  depth_rec(0, F, 0);
  // largest candidate by branch and bound: with budget R and primes >= p,
  // every extension prime q satisfies log q <= 2 log(2 w(q) (q+1)/(q-1)), so
  // log of the extension is at most 2 (log R + k log(2 (p+1)/(p-1)))
  i64 best_n = 1;
  std::function<void(size_t, double, i64)> max_rec = [&](size_t idx, double R, i64 n) {
    if (n > best_n) best_n = n;
    for (size_t i = idx; i < primes.size(); ++i) {
      i64 p = primes[i];
      if (p == 2) continue;
      double w = weight(i);
      double rem = f4_remaining_slack(p, N, f);
      if (w * rem > R) {
        if (f4_weight_floor(p) * rem > R) break;
        continue;
      }
      double boost = static_cast<double>(p + 1) / static_cast<double>(p - 1);
      int kmax = max_depth(i, R);
      double ub = std::log(static_cast<double>(n)) +
                  2.0 * (std::log(std::max(R, 1.0)) + kmax * std::log(2.0 * boost));
      if (ub <= std::log(static_cast<double>(best_n)) + 1e-9) break;
      if (w > R) continue;  // transient overshoot cannot help the maximum
      if (n > (i64(1) << 62) / p) continue;
      max_rec(i + 1, R / w, n * p);
    }
  };
  max_rec(0, F, 1);
  st.max_candidate = best_n;
  return st;
}

}  // namespace oddrep
