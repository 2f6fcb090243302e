#include "oddrep/bessel.hpp"

#include <cmath>

namespace oddrep {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// ascending series, accurate for x <= 2
BesselEval bessel_small(double x) {
  double t = x * x / 4.0;
  double lnh = std::log(x / 2.0);
  // I0, I1 and the companion sums
  double i0 = 1.0, i1 = 1.0;  // i1 holds sum for I1/(x/2)
  double s0 = 0.0;            // sum (t^k/(k!)^2) H_k
  double s1 = 0.0;            // sum [psi(k+1)+psi(k+2)] t^k/(k!(k+1)!)
  double tk0 = 1.0;           // t^k/(k!)^2
  double tk1 = 1.0;           // t^k/(k!(k+1)!)
  double hk = 0.0;
  s1 = (-kEulerGamma) + (1.0 - kEulerGamma);  // k = 0 term
  for (int k = 1; k < 40; ++k) {
    tk0 *= t / (static_cast<double>(k) * k);
    tk1 *= t / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    i0 += tk0;
    i1 += tk1;
    s0 += tk0 * hk;
    double psi1 = -kEulerGamma + hk;              // psi(k+1)
    double psi2 = psi1 + 1.0 / (k + 1);           // psi(k+2)
    s1 += tk1 * (psi1 + psi2);
    if (tk0 < 1e-19 * i0 && tk1 < 1e-19 * i1) break;
  }
  i1 *= x / 2.0;
  BesselEval b;
  b.x = x;
  b.k0 = -(lnh + kEulerGamma) * i0 + s0;
  b.k1 = 1.0 / x + lnh * i1 - (x / 4.0) * s1;
  b.rel_err = 1e-13;
  return b;
}

// Steed/Thompson-Barnett continued fraction, accurate for x >= 2
BesselEval bessel_cf(double x) {
  const double eps = 1e-16;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) <= eps) break;
  }
  h = a1 * h;
  BesselEval r;
  r.x = x;
  r.k0 = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) / s;
  r.k1 = r.k0 * (x + 0.5 - h) / x;
  r.rel_err = 1e-13;
  return r;
}

}  // namespace

BesselEval bessel_k(double x) {
  if (!(x > 0)) throw Error(ErrorCode::NonPositiveArgument, "bessel_k needs x > 0");
  return x <= 2.0 ? bessel_small(x) : bessel_cf(x);
}

double bessel_k0(double x) { return bessel_k(x).k0; }
double bessel_k1(double x) { return bessel_k(x).k1; }

double psi_weight(double x) {
  if (!(x > 0)) throw Error(ErrorCode::NonPositiveArgument, "psi needs x > 0");
  if (4 * M_PI * x > 700.0) return 0.0;  // below 1e-290, underflows anyway
  BesselEval b = bessel_k(4 * M_PI * x);
  return -(6.0 / M_PI) * x * b.k1 + 24.0 * x * x * b.k0;
}

double geometric_d2_tail(double t, i64 a) {
  // sum_{d>=a} d^2 t^d = t^a (a^2 - (2a^2-2a-1) t + (a-1)^2 t^2) / (1-t)^3
  double ta = std::pow(t, static_cast<double>(a));
  double aa = static_cast<double>(a);
  double num = aa * aa - (2 * aa * aa - 2 * aa - 1) * t + (aa - 1) * (aa - 1) * t * t;
  double den = (1 - t) * (1 - t) * (1 - t);
  return ta * num / den;
}

PsiSum psi_sum(double x) {
  if (!(x > 0)) throw Error(ErrorCode::NonPositiveArgument, "psi_sum needs x > 0");
  // explicit terms until 4 pi d x >= 45 (psi below ~1e-19 of scale), then a
  // positive majorant tail: psi(y) <= 6 sqrt(2) y^{3/2} e^{-4 pi y} <= 6
  // sqrt(2) x^{3/2} d^2 e^{-4 pi x d}
  PsiSum out{0.0, 0.0};
  i64 a = static_cast<i64>(std::ceil(45.0 / (4 * M_PI * x)));
  if (a < 2) a = 2;
  if (a > 100000000) a = 100000000;
  for (i64 d = 1; d < a; ++d) out.value += psi_weight(d * x);
  double t = std::exp(-4 * M_PI * x);
  out.tail_bound = 6.0 * std::sqrt(2.0) * std::pow(x, 1.5) * geometric_d2_tail(t, a);
  return out;
}

}  // namespace oddrep
