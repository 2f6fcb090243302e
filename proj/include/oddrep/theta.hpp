#ifndef ODDREP_THETA_HPP
#define ODDREP_THETA_HPP

#include <functional>
#include <vector>

#include "oddrep/form.hpp"

namespace oddrep {

struct EnumBudget {
  u64 max_vectors = u64(1) << 34;  // enumerated lattice points (half-count)
};

// theta coefficient table r_Q(0..B) from one enumeration of Q(x) <= B
struct ThetaSeries {
  i64 precision = 0;
  std::vector<i64> coeff;  // coeff[n] = r_Q(n)
  i64 operator[](i64 n) const { return coeff[static_cast<size_t>(n)]; }
};

// Visits one representative of every +-pair x with Q(x) <= B (zero vector
// excluded); mult is 2 for all of them. Returns number of visits.
u64 enumerate_vectors(const QuadraticForm& q, i64 bound,
                      const std::function<void(const std::vector<i64>&, i64)>& visit,
                      const EnumBudget& budget = {});

ThetaSeries theta_series(const QuadraticForm& q, i64 bound, const EnumBudget& budget = {});

// all x with Q(x) = n, both signs included
std::vector<std::vector<i64>> representations(const QuadraticForm& q, i64 n,
                                              const EnumBudget& budget = {});

// sum_{n<=x} r_Q(n), and the Cholesky box bound prod_i (2 sqrt(x/a_i) + 1)
Int partial_sum(const QuadraticForm& q, i64 x, const EnumBudget& budget = {});
double partial_sum_box_bound(const QuadraticForm& q, i64 x);

// presence bitmap of represented values <= B (value 0 included)
class ThetaBitmap {
 public:
  ThetaBitmap() = default;
  ThetaBitmap(const QuadraticForm& q, i64 bound, const EnumBudget& budget = {});
  bool test(i64 n) const {
    return n >= 0 && n <= bound_ && (bits_[static_cast<size_t>(n >> 6)] >> (n & 63)) & 1;
  }
  i64 bound() const { return bound_; }

 private:
  i64 bound_ = -1;
  std::vector<u64> bits_;
};

}  // namespace oddrep

#endif
