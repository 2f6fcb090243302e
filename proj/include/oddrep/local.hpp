#ifndef ODDREP_LOCAL_HPP
#define ODDREP_LOCAL_HPP

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "oddrep/form.hpp"

namespace oddrep {

// Hilbert symbol (a,b)_p; p = 0 means the infinite place.
int hilbert_symbol(const Int& a, const Int& b, i64 p);

// Jordan constituent over Z_p: Q-block  p^scale * U  with U one of
//   Unit        u x^2                      (u a unit; mod 8 for p = 2)
//   Hyperbolic  x y                        (Gram [[0,1],[1,0]], p = 2 only)
//   EvenSquare  x^2 + x y + y^2            (Gram [[2,1],[1,2]], p = 2 only)
struct JordanBlock {
  enum Kind { Unit, Hyperbolic, EvenSquare } kind;
  int scale;
  i64 unit;  // representative: QR class for odd p, class mod 8 for p = 2
  int dim() const { return kind == Unit ? 1 : 2; }
  bool operator<(const JordanBlock& o) const {
    if (scale != o.scale) return scale < o.scale;
    if (kind != o.kind) return kind < o.kind;
    return unit < o.unit;
  }
  bool operator==(const JordanBlock& o) const {
    return kind == o.kind && scale == o.scale && unit == o.unit;
  }
};

struct JordanSplitting {
  i64 p;
  std::vector<JordanBlock> blocks;  // sorted by (scale, kind, unit)
};

JordanSplitting jordan_splitting(const QuadraticForm& q, i64 p);

struct LocalInvariants {
  i64 p;
  bool square_disc;  // disc in (Q_p^x)^2
  int epsilon;       // +-1
  bool anisotropic;
};

LocalInvariants local_invariants(const QuadraticForm& q, i64 p);
int epsilon_invariant(const QuadraticForm& q, i64 p);
bool is_anisotropic(const QuadraticForm& q, i64 p);

struct DensityValue {
  i64 place;  // prime, or 0 for the infinite place
  i64 n;
  Rat value;        // exact for finite places
  double real_value;  // archimedean
};

// residue classes mod M with their local-representability flag
struct SquareclassProfile {
  i64 modulus = 0;
  std::vector<i64> missed;  // residues a mod M, every member locally missed
  std::vector<i64> mixed;   // residues whose p-adic class is not constant on the class
};

// Per-form engine for exact p-adic representation densities, with the caches
// keyed by (p, ord, unit class).
class LocalDensities {
 public:
  explicit LocalDensities(QuadraticForm q);

  const QuadraticForm& form() const { return q_; }
  const JordanSplitting& splitting(i64 p) const;

  // beta_p(m), exact; m >= 1
  Rat density(i64 p, i64 m) const;

  // beta_infinity(n) = (2 pi)^{r/2} n^{r/2-1} / (Gamma(r/2) sqrt(det A))
  double archimedean(i64 n) const;

  bool locally_represents(i64 n) const;  // n >= 0
  SquareclassProfile missed_classes() const;

  // quaternary only: exact rational part of a_E(n); a_E(n) itself equals
  // eisenstein_rational(n) (no archimedean factor left over)
  Rat eisenstein_rational(i64 n) const;

  // quaternary only: the constant C_E with
  //   a_E(n) >= C_E n prod_{p | n, p coprime to N, chi(p) = -1} (p-1)/(p+1)
  // for all odd squarefree locally represented n
  Rat eisenstein_lower_constant() const;

  i64 char_fundamental() const { return chi_f_; }  // conductor-bearing discriminant

 private:
  Rat density_class(i64 p, int ord, i64 unit) const;
  QuadraticForm q_;
  i64 chi_f_ = 1;  // fundamental discriminant attached to character_disc
  i64 chi_c_ = 1;  // character_disc = chi_f * chi_c^2
  Rat b2chi_;      // generalized Bernoulli number B_{2,chi}
  std::vector<i64> ramified_;  // primes dividing 2 * disc
  mutable std::mutex mu_;
  mutable std::map<i64, JordanSplitting> jordan_;
  mutable std::map<std::tuple<i64, int, i64>, Rat> class_cache_;
};

// one-off convenience wrappers matching the operation names
Rat local_density(const QuadraticForm& q, i64 n, i64 p);
double archimedean_density(const QuadraticForm& q, i64 n);
bool locally_represents(const QuadraticForm& q, i64 n);
SquareclassProfile locally_missed_classes(const QuadraticForm& q);
Rat eisenstein_coefficient(const QuadraticForm& q, i64 n);          // exact rational
Rat eisenstein_lower_constant(const QuadraticForm& q);

// B_{2,chi} for the quadratic character of fundamental discriminant f
Rat bernoulli2_chi(i64 f);

}  // namespace oddrep

#endif
