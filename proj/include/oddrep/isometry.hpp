#ifndef ODDREP_ISOMETRY_HPP
#define ODDREP_ISOMETRY_HPP

#include <optional>
#include <vector>

#include "oddrep/form.hpp"

namespace oddrep {

// integer matrix L (rank(Q) x rank(R) columns) with L^T A_Q L = A_R
struct Embedding {
  std::vector<std::vector<i64>> cols;  // cols[k] = k-th column vector in Z^rank(Q)
};

// Greedy Minkowski-style size reduction; optionally reports the change of
// basis U with U^T A U = A_reduced.
QuadraticForm reduce(const QuadraticForm& q, std::vector<std::vector<i64>>* basis = nullptr);

// successive minima in Q-value convention (lambda_1 <= ... <= lambda_r)
std::vector<i64> successive_minima(const QuadraticForm& q);

// witness U (columns are vectors of L_1) with U^T A_1 U = A_2
std::optional<std::vector<std::vector<i64>>> isometry(const QuadraticForm& q1,
                                                      const QuadraticForm& q2);
bool is_isometric(const QuadraticForm& q1, const QuadraticForm& q2);

// embedding of R into Q as a sublattice, if one exists
std::optional<Embedding> represents_form(const QuadraticForm& q, const QuadraticForm& r);

}  // namespace oddrep

#endif
