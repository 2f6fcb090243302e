#ifndef ODDREP_BESSEL_HPP
#define ODDREP_BESSEL_HPP

#include "oddrep/arith.hpp"

namespace oddrep {

struct BesselEval {
  double x;
  double k0;
  double k1;
  double rel_err;  // guaranteed relative error bound
};

// modified Bessel functions of the second kind, relative error <= 1e-12
BesselEval bessel_k(double x);
double bessel_k0(double x);
double bessel_k1(double x);

// psi(x) = -(6/pi) x K1(4 pi x) + 24 x^2 K0(4 pi x); psi(0+) -> -3/(2 pi^2)
double psi_weight(double x);

// sum_{d>=1} psi(d x) with a certified nonnegative tail bound:
// the true sum lies in [value, value + tail_bound]
struct PsiSum {
  double value;
  double tail_bound;
};
PsiSum psi_sum(double x);

// closed form for sum_{d>=a} d^2 t^d, 0 < t < 1
double geometric_d2_tail(double t, i64 a);

}  // namespace oddrep

#endif
