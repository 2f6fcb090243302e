// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier batch-scale reproductions (full four-dimensional tree,
// multi-billion candidate sweeps) are reachable through the CLI, not here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "oddrep/analytic.hpp"
#include "oddrep/bessel.hpp"
#include "oddrep/escalation.hpp"
#include "oddrep/isometry.hpp"
#include "oddrep/local.hpp"
#include "oddrep/theta.hpp"
#include "oddrep/verify.hpp"

using namespace oddrep;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void report_line(int criterion, bool pass, const std::string& detail) {
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
  std::printf("criterion %2d: %s  [%7.1fs]  %s\n", criterion, pass ? "PASS" : "FAIL", secs,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

i64 jacobi_four_square(i64 n) {
  if (n == 0) return 1;
  i64 s = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0 && d % 4 != 0) s += d;
  return 8 * s;
}

// 1. escalation counts and binary truants
void criterion1() {
  EscalationTree tree = build_tree(TargetSet::odds(), 3);
  bool ok = tree.layer_count(0) == 1 && tree.layer_count(1) == 1 && tree.layer_count(2) == 4 &&
            tree.layer_count(3) == 73;
  std::multiset<i64> bt;
  for (const auto& node : tree.layers[2]) bt.insert(node.truant);
  ok = ok && bt == std::multiset<i64>{5, 5, 5, 7};
  char buf[128];
  std::snprintf(buf, sizeof buf, "layers %lld,%lld,%lld,%lld binary truants {5,5,5,7}%s",
                (long long)tree.layer_count(0), (long long)tree.layer_count(1),
                (long long)tree.layer_count(2), (long long)tree.layer_count(3),
                ok ? "" : " MISMATCH");
  report_line(1, ok, buf);
}

// 2. Kaplansky candidates
void criterion2() {
  EscalationTree tree = build_tree(TargetSet::odds(), 3);
  auto cands = kaplansky_candidates(tree, i64(1) << 14);
  bool ok = cands.size() == 23;
  int found = 0;
  for (const char* s : {"x^2+2y^2+5z^2+xz", "x^2+3y^2+6z^2+xy+2yz", "x^2+3y^2+7z^2+xy+xz"}) {
    auto q = parse_form(s);
    for (const auto& c : cands)
      if (is_isometric(c, q)) {
        ++found;
        break;
      }
  }
  ok = ok && found == 3;
  report_line(2, ok,
              "candidates at 2^14: " + std::to_string(cands.size()) +
                  ", conjectural ternaries found: " + std::to_string(found) + "/3");
}

// 3. known truant table
void criterion3() {
  int bad = 0;
  TargetSet odds = TargetSet::odds();
  for (const auto& row : truant_table()) {
    QuadraticForm q = row.form[0] ? parse_form(row.form) : QuadraticForm::zero();
    auto tr = truant(q, odds, 1024);
    if (!tr.truant || *tr.truant != row.truant) ++bad;
  }
  report_line(3, bad == 0,
              std::to_string(truant_table().size() - bad) + "/" +
                  std::to_string(truant_table().size()) + " rows reproduce their truant");
}

// 4. theta fidelity
void criterion4() {
  auto t = theta_series(parse_form("x^2+2y^2+5z^2+xz"), 5);
  bool ok = t.coeff == std::vector<i64>{1, 2, 2, 4, 2, 4};
  auto t4 = theta_series(parse_form("x^2+y^2+z^2+w^2"), 1000);
  for (i64 n = 0; n <= 1000 && ok; ++n)
    if (t4[n] != jacobi_four_square(n)) ok = false;
  report_line(4, ok, "ternary prefix 1,2,2,4,2,4 and four-square r(n) vs Jacobi, n <= 1000");
}

// 5. Eisenstein = theta for the one-class genus
void criterion5() {
  LocalDensities ld(parse_form("x^2+y^2+z^2+w^2"));
  bool ok = true;
  for (i64 n = 1; n <= 200; ++n)
    if (ld.eisenstein_rational(n) != Rat(jacobi_four_square(n))) ok = false;
  report_line(5, ok, "local-density product equals r(n) exactly for n <= 200");
}

// 6. Eisenstein lower constants
void criterion6() {
  auto q1 = parse_form("x^2+3y^2+3yz+3yw+5z^2+zw+34w^2");
  auto q2 = parse_form("x^2-xz+2y^2+yz-2yw+5z^2+zw+29w^2");
  LocalDensities l1(q1), l2(q2);
  Rat c1 = l1.eisenstein_lower_constant();
  Rat c2 = l2.eisenstein_lower_constant();
  bool ok = c1 == Rat(28, 151) && c2 == Rat(28, 117);
  auto audit = [&](LocalDensities& ld, const QuadraticForm& q, const Rat& ce) {
    i64 f = ld.char_fundamental();
    for (i64 n = 1; n <= 5000; n += 2) {
      if (!is_squarefree(n) || !ld.locally_represents(n)) continue;
      Rat target = ce * n;
      for (auto& [p, e] : factorize(n)) {
        (void)e;
        if (q.level() % p != 0 && kronecker(f, p) == -1) target *= Rat(p - 1, p + 1);
      }
      if (ld.eisenstein_rational(n) < target) return false;
    }
    return true;
  };
  ok = ok && audit(l1, q1, c1) && audit(l2, q2, c2);
  report_line(6, ok, "C_E = 28/151 and 28/117 exactly, audits clean to 5000");
}

// 7. the analytic pipeline on the fundamental-discriminant example
void criterion7() {
  auto q = parse_form("x^2+3y^2+3yz+3yw+5z^2+zw+34w^2");
  bool ok = true;
  std::string detail;
  try {
    i64 u = dim_s2(6780, 6780);
    ok = ok && u == 1360;
    double B = newform_petersson_lower(6780);
    ok = ok && std::fabs(B - 1.019e-5) <= 0.02 * 1.019e-5;
    CuspConstantCertificate cert = cusp_constant(q);
    ok = ok && std::fabs(cert.norm_lo - 0.01066) <= 0.05 * 0.01066;
    ok = ok && std::fabs(cert.norm_hi - 0.01079) <= 0.05 * 0.01079;
    ok = ok && cert.cq <= 1199.86 * 1.05;
    ok = ok && cert.f4_threshold >= 6470.0 / 1.05 && cert.f4_threshold <= 6862.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "u=%lld B=%.4g <C,C> in [%.5g, %.5g] C_Q<=%.2f F=%.1f",
                  (long long)u, B, cert.norm_lo, cert.norm_hi, cert.cq, cert.f4_threshold);
    detail = buf;
  } catch (const Error& e) {
    ok = false;
    detail = std::string("error: ") + e.what();
  }
  report_line(7, ok, detail);
}

// 8. candidate enumeration
void criterion8() {
  bool ok = true;
  F4Stats st = f4_stats(6535.0, 6780, 6780);
  ok = ok && st.max_candidate == 8314659320208531LL && st.max_prime_factors == 12;
  // stream equals the brute scan, F = 50 with the example character
  std::set<i64> stream;
  f4_candidates(50.0, 6780, 6780, 1000000, [&](i64 n) { stream.insert(n); });
  std::set<i64> stream_small;
  for (i64 n : stream)
    if (n <= 1000000) stream_small.insert(n);
  std::set<i64> brute;
  for (i64 n = 1; n <= 1000000; n += 2)
    if (is_squarefree(n) && f4_value(n, 6780, 6780) <= 50.0) brute.insert(n);
  ok = ok && stream_small == brute;
  // the trivial character sample
  std::set<i64> stream10;
  f4_candidates(10.0, 1, 1, 1000000, [&](i64 n) {
    if (n <= 1000000) stream10.insert(n);
  });
  std::set<i64> brute10;
  for (i64 n = 1; n <= 1000000; n += 2)
    if (is_squarefree(n) && f4_value(n, 1, 1) <= 10.0) brute10.insert(n);
  ok = ok && stream10 == brute10;
  char buf[160];
  std::snprintf(buf, sizeof buf, "max candidate %lld, prime cap %d, scans agree (%zu, %zu)",
                (long long)st.max_candidate, st.max_prime_factors, stream_small.size(),
                stream10.size());
  report_line(8, ok, buf);
}

// 9. the verification loops
void criterion9() {
  bool ok = true;
  std::string detail;
  auto r1 = check_interval(parse_form("x^2+2y^2+5z^2+xz"), 1, 630654, TargetSet::odds());
  ok = ok && r1.exceptions.empty();
  // 4 Q = w^2 + 11 y^2 + 8 y z + 24 z^2 for the second form: sweep 4 mod 8
  auto q2 = QuadraticForm::from_gram({{2, 0, 0}, {0, 22, 8}, {0, 8, 48}});
  auto r2 = check_interval(q2, 4, 1680000, TargetSet::residues(8, {4}));
  ok = ok && r2.exceptions.empty();
  // 4 Q = w^2 + 11 y^2 - 2 y z + 27 z^2 for the third
  auto q3 = QuadraticForm::from_gram({{2, 0, 0}, {0, 22, -2}, {0, -2, 54}});
  auto r3 = check_interval(q3, 4, 10912000, TargetSet::residues(8, {4}));
  ok = ok && r3.exceptions.empty();
  // reformulation sanity: r_{Q}(n) > 0 iff r_{Q'}(4n) > 0 on a prefix
  auto qb = parse_form("x^2+3y^2+6z^2+xy+2yz");
  auto tb = theta_series(qb, 200);
  ThetaBitmap bb(q2, 800);
  for (i64 n = 1; n <= 200 && ok; n += 2)
    if ((tb[n] > 0) != bb.test(4 * n)) ok = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "exceptions: %zu, %zu, %zu over 630654 / 1680000 / 10912000",
                r1.exceptions.size(), r2.exceptions.size(), r3.exceptions.size());
  report_line(9, ok, buf);
}

// 10. property suites
void criterion10() {
  bool ok = true;
  std::string fails;
  // S2^- vanishing for five fundamental-discriminant quaternaries to 15N
  const char* forms5[] = {
      "x^2+xy+y^2+yz+z^2+zw+w^2",            // A4, disc 5
      "x^2+y^2+z^2+w^2+xw",                  // disc 12
      "x^2+xy+y^2+z^2+zw+2w^2",              // disc 21
      "x^2+xy+y^2+z^2+zw+3w^2",              // disc 33
      "x^2+3y^2+3yz+3yw+5z^2+zw+34w^2",      // disc 6780
  };
  for (const char* s : forms5) {
    auto q = parse_form(s);
    i64 f = q.disc64();
    if (!is_fundamental_discriminant(f)) {
      ok = false;
      fails += std::string(" nonfund:") + s;
      continue;
    }
    DualCuspData dc = dual_cusp_coefficients(q);
    i64 N = q.level();
    for (i64 n = 1; n <= dc.bound; ++n) {
      if (gcd64(n, N) != 1 || kronecker(f, n) != 1) continue;
      if (dc.cusp[static_cast<size_t>(n)] != 0) {
        ok = false;
        fails += std::string(" S2-:") + s;
        break;
      }
    }
  }
  // psi limit
  PsiSum s = psi_sum(1e-3);
  if (std::fabs(s.value - 3.0 / (4 * M_PI * M_PI)) > 1e-3) {
    ok = false;
    fails += " psi-limit";
  }
  // Fourier transform identity at y = 0, 1, 2 within 1e-6
  for (double y : {0.0, 1.0, 2.0}) {
    const double X = 12.0;
    const int n = 48000;
    double h = X / n;
    auto f = [&](double x) {
      double p = x == 0.0 ? -3.0 / (2 * M_PI * M_PI) : psi_weight(x);
      return p * std::cos(2 * M_PI * x * y);
    };
    double acc = f(0) + f(X);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    double got = 2.0 * acc * h / 3.0;
    double expect = -9.0 * y * y / (M_PI * M_PI * std::pow(4.0 + y * y, 2.5));
    if (std::fabs(got - expect) > 1e-6) {
      ok = false;
      fails += " psihat";
    }
  }
  // product of epsilon invariants over the ramified primes is 1
  u64 seed = 20260809;
  int done = 0;
  while (done < 100) {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    int n = 2 + static_cast<int>((seed >> 33) % 4);
    std::vector<std::vector<i64>> g(n, std::vector<i64>(n, 0));
    for (int i = 0; i < n; ++i) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      g[i][i] = 2 + 2 * static_cast<i64>((seed >> 33) % 9);
      for (int j = i + 1; j < n; ++j) {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        g[i][j] = g[j][i] = static_cast<i64>((seed >> 33) % 5) - 2;
      }
    }
    try {
      auto q = QuadraticForm::from_gram(g);
      ++done;
      int prod = 1;
      for (auto& [p, e] : factorize(to_i64(2 * q.disc()))) {
        (void)e;
        prod *= epsilon_invariant(q, p);
      }
      if (prod != 1) {
        ok = false;
        fails += " epsilon";
      }
    } catch (const Error&) {
    }
  }
  // square scaling at the anisotropic prime of the 451-exception form
  if (!anisotropic_square_scaling_check(parse_form("x^2+xy+3y^2+4z^2+33w^2"), 11, 500)) {
    ok = false;
    fails += " square-scaling";
  }
  report_line(10, ok, fails.empty() ? "S2^- vanishing, psi limit, psi-hat, epsilon, scaling"
                                    : ("failed:" + fails));
}

}  // namespace

int main() {
  g_t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf(
      "criterion 11: NOTE  asymptotic bounds and the full 24888/21756-form classifications "
      "are batch-mode reproductions (oddrep escalate --max-dim 4, oddrep certify "
      "--full-sweep), not CI assertions\n");
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
