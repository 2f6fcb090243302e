#ifndef ODDREP_VERIFY_HPP
#define ODDREP_VERIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "oddrep/analytic.hpp"
#include "oddrep/escalation.hpp"
#include "oddrep/form.hpp"
#include "oddrep/isometry.hpp"
#include "oddrep/theta.hpp"

namespace oddrep {

// R(x,..) + d w^2 represented by Q, used to accelerate representation tests
struct SplitLocalCover {
  QuadraticForm restriction;  // R, rank(Q) - 1
  i64 d = 0;                  // norm of the split vector
  std::vector<i64> split_vector;
  Embedding witness;          // columns: restriction basis then the split vector
};

SplitLocalCover find_split_local_cover(const QuadraticForm& q, i64 norm_bound = 64);

struct ExceptionReport {
  std::string method;             // "method1" | "method2" | "method3" | "interval"
  std::vector<i64> exceptions;    // verified non-represented members, sorted
  bool complete = false;          // squarefree-complete (method 3) or full-range
  i64 certified_through = 0;      // watermark for bounded checks
  std::string note;
  u64 candidates_checked = 0;
  u64 cover_misses = 0;           // candidates that needed the direct fallback
  i64 queue_classes = 0;          // method 2 only
};

// every candidate failing the cover test is re-checked by direct enumeration
ExceptionReport sweep_candidates(const QuadraticForm& q, const SplitLocalCover& cover,
                                 const std::vector<i64>& candidates, i64 small_bound = 5000,
                                 double table_factor = 64.0);

ExceptionReport check_interval(const QuadraticForm& q, i64 lo, i64 hi, const TargetSet& s);

// method 1: odd-universal ternary sublattice
std::optional<QuadraticForm> method1(const QuadraticForm& q,
                                     const std::vector<QuadraticForm>& ternary_db);

// regular ternaries are trusted input
struct RegularTernaryDB {
  std::vector<QuadraticForm> forms;
  std::vector<std::string> sources;
  static RegularTernaryDB load(const std::string& path);
  static RegularTernaryDB builtin();  // the handful quoted in the starter data
};

struct Method2Options {
  i64 class_scan_bound = 1000000;
  i64 max_queue = 1 << 20;
};
ExceptionReport method2(const QuadraticForm& q, const RegularTernaryDB& db,
                        const Method2Options& opt = {});

struct Method3Options {
  int trunc_multiplier = 15;
  bool full_sweep = false;   // enumerate and sweep all F4 candidates (batch)
  i64 small_bound = 5000;
  double threshold_override = 0;  // use instead of C_Q/C_E when > 0
};
struct Method3Result {
  CuspConstantCertificate certificate;
  F4Stats stats;
  ExceptionReport report;
};
Method3Result method3(const QuadraticForm& q, const Method3Options& opt = {});

struct ReportConfig {
  std::vector<QuadraticForm> ternary_db;  // odd-universal ternaries for method 1
  RegularTernaryDB regular_db;
  Method2Options m2;
  Method3Options m3;
  i64 fallback_interval = 0;  // when > 0 run check_interval to this bound
};
ExceptionReport report(const QuadraticForm& q, const ReportConfig& config);

// verifies r_Q(p^2 n) = r_Q(n) for n <= n_max; witness holds a failing n
bool anisotropic_square_scaling_check(const QuadraticForm& q, i64 p, i64 n_max,
                                      i64* witness = nullptr);

}  // namespace oddrep

#endif
