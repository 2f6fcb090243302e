#ifndef ODDREP_FORM_HPP
#define ODDREP_FORM_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "oddrep/arith.hpp"

namespace oddrep {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

double to_double(const Rat& r);
i64 to_i64(const Int& n);  // throws Overflow when out of range

// exact Cholesky-style factorization A = M^T diag M, M unitriangular.
// diag holds the Gram-matrix convention entries: diag[0] = A[0][0].
struct CholeskyData {
  std::vector<Rat> diag;
  std::vector<std::vector<Rat>> unitri;  // upper triangular, unit diagonal
};

// Positive-definite integer-valued quadratic form Q(x) = (1/2) x^T A x,
// A symmetric with even diagonal. Immutable after construction.
class QuadraticForm {
 public:
  QuadraticForm() : disc_(1), level_(1) {}  // the zero-dimensional form
  // validates symmetry, even diagonal, positive definiteness
  static QuadraticForm from_gram(std::vector<std::vector<i64>> gram);
  // zero-dimensional form (the empty lattice)
  static QuadraticForm zero();

  int rank() const { return static_cast<int>(gram_.size()); }
  i64 gram(int i, int j) const { return gram_[i][j]; }
  const std::vector<std::vector<i64>>& gram_matrix() const { return gram_; }

  const Int& disc() const { return disc_; }          // det(A)
  i64 disc64() const { return to_i64(disc_); }
  i64 level() const { return level_; }               // least N: N A^{-1} integral, even diagonal
  i64 character_disc() const;                        // D for chi_D; rank 4: det(A)

  QuadraticForm dual() const;                        // gram N A^{-1}
  CholeskyData cholesky() const;

  i64 evaluate(const std::vector<i64>& x) const;     // Q(x)
  Int evaluate_big(const std::vector<Int>& x) const;

  std::string polynomial() const;                    // e.g. "x^2 + x*y + 3*y^2"
  std::string gram_string() const;                   // [[..],..]

  bool operator==(const QuadraticForm& o) const { return gram_ == o.gram_; }
  bool operator!=(const QuadraticForm& o) const { return !(*this == o); }
  bool operator<(const QuadraticForm& o) const;      // lexicographic on (rank, gram)

 private:
  std::vector<std::vector<i64>> gram_;
  Int disc_;
  i64 level_ = 0;
};

// exact determinant / adjugate of an integer matrix
Int det_int(const std::vector<std::vector<Int>>& m);
std::vector<std::vector<Int>> adjugate_int(const std::vector<std::vector<Int>>& m);

// Parses either a polynomial like "x^2+3y^2+xy-2zw" (variables x,y,z,w,v,u
// for coordinates 1..6, '^2' squares, juxtaposition as product) or a JSON
// object {"gram": [[...],...]}.
QuadraticForm parse_form(const std::string& text);
std::string form_to_json(const QuadraticForm& q);

}  // namespace oddrep

#endif
