#include "oddrep/verify.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

#include "json.hpp"
#include "oddrep/local.hpp"

namespace oddrep {

// ---------------------------------------------------------------------------
// split local covers
// ---------------------------------------------------------------------------
namespace {

// integer kernel basis of the single linear form g (nonzero), as columns
std::vector<std::vector<i64>> kernel_basis(std::vector<i64> g) {
  int n = static_cast<int>(g.size());
  // unimodular column operations bringing g to (d, 0, ..., 0)
  std::vector<std::vector<i64>> U(n, std::vector<i64>(n, 0));
  for (int i = 0; i < n; ++i) U[i][i] = 1;
  for (;;) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (g[i] != 0 && (piv < 0 || std::llabs(g[i]) < std::llabs(g[piv]))) piv = i;
    bool done = true;
    for (int i = 0; i < n; ++i)
      if (i != piv && g[i] != 0) done = false;
    if (done) {
      std::vector<std::vector<i64>> cols;
      for (int i = 0; i < n; ++i) {
        if (i == piv) continue;
        std::vector<i64> col(n);
        for (int r = 0; r < n; ++r) col[r] = U[r][i];
        cols.push_back(std::move(col));
      }
      return cols;
    }
    for (int i = 0; i < n; ++i) {
      if (i == piv || g[i] == 0) continue;
      i64 c = g[i] / g[piv];
      g[i] -= c * g[piv];
      for (int r = 0; r < n; ++r) U[r][i] -= c * U[r][piv];
    }
  }
}

i64 gram_pair(const QuadraticForm& q, const std::vector<i64>& a, const std::vector<i64>& b) {
  i64 acc = 0;
  for (int i = 0; i < q.rank(); ++i) {
    i64 row = 0;
    for (int j = 0; j < q.rank(); ++j) row += q.gram(i, j) * b[j];
    acc += a[i] * row;
  }
  return acc;
}

}  // namespace

SplitLocalCover find_split_local_cover(const QuadraticForm& q, i64 norm_bound) {
  if (q.rank() < 2) throw Error(ErrorCode::NoCoverFound, "cover needs rank >= 2");
  std::optional<SplitLocalCover> best;
  for (i64 d = 1; d <= norm_bound; ++d) {
    auto reps = representations(q, d);
    for (const auto& w : reps) {
      // primitive vectors only
      i64 g = 0;
      for (i64 x : w) g = gcd64(g, x);
      if (g != 1) continue;
      std::vector<i64> aw(q.rank());
      for (int i = 0; i < q.rank(); ++i) {
        aw[i] = 0;
        for (int j = 0; j < q.rank(); ++j) aw[i] += q.gram(i, j) * w[j];
      }
      auto cols = kernel_basis(aw);
      int m = static_cast<int>(cols.size());
      std::vector<std::vector<i64>> rg(m, std::vector<i64>(m));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) rg[i][j] = gram_pair(q, cols[i], cols[j]);
      std::vector<std::vector<i64>> u;
      QuadraticForm r = reduce(QuadraticForm::from_gram(std::move(rg)), &u);
      SplitLocalCover cand;
      cand.restriction = r;
      cand.d = d;
      cand.split_vector = w;
      // carry the reduction change of basis into the witness columns
      cand.witness.cols.assign(m + 1, std::vector<i64>(q.rank(), 0));
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int t = 0; t < q.rank(); ++t)
            cand.witness.cols[j][t] += u[k][j] * cols[k][t];
      cand.witness.cols[m] = w;
      bool better = !best || cand.d < best->d ||
                    (cand.d == best->d && (cand.restriction.disc() < best->restriction.disc() ||
                                           (cand.restriction.disc() == best->restriction.disc() &&
                                            cand.restriction < best->restriction)));
      if (better) best = std::move(cand);
    }
    if (best && best->d <= d) break;  // smallest d found; later d cannot improve
  }
  if (!best) throw Error(ErrorCode::NoCoverFound, "no primitive vector below the norm bound");
  return *best;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------
namespace {

// does n - d y^2 land in the bitmap for some y (scanning from the top)
bool cover_hit(const ThetaBitmap& bm, i64 d, i64 n) {
  i64 ymax = isqrt64(n / d);
  for (i64 y = ymax; y >= 0; --y) {
    i64 rem = n - d * y * y;
    if (rem > bm.bound()) return false;
    if (bm.test(rem)) return true;
  }
  return false;
}

}  // namespace

ExceptionReport sweep_candidates(const QuadraticForm& q, const SplitLocalCover& cover,
                                 const std::vector<i64>& candidates, i64 small_bound,
                                 double table_factor) {
  ExceptionReport rep;
  rep.method = "sweep";
  i64 maxc = 0;
  for (i64 n : candidates) maxc = std::max(maxc, n);
  i64 table = static_cast<i64>(table_factor * std::sqrt(static_cast<double>(std::max<i64>(maxc, 1))));
  table = std::max(table, std::min(maxc, small_bound));
  ThetaBitmap bm(cover.restriction, table);
  ThetaBitmap direct_small(q, std::min(maxc, small_bound));
  for (i64 n : candidates) {
    ++rep.candidates_checked;
    if (n <= small_bound) {
      if (!direct_small.test(n)) rep.exceptions.push_back(n);
      continue;
    }
    if (cover_hit(bm, cover.d, n)) continue;
    ++rep.cover_misses;
    if (representations(q, n).empty()) rep.exceptions.push_back(n);
  }
  std::sort(rep.exceptions.begin(), rep.exceptions.end());
  rep.complete = true;
  rep.certified_through = maxc;
  return rep;
}

ExceptionReport check_interval(const QuadraticForm& q, i64 lo, i64 hi, const TargetSet& s) {
  if (lo > hi) throw Error(ErrorCode::NonPositiveArgument, "empty interval");
  ExceptionReport rep;
  rep.method = "interval";
  SplitLocalCover cover = find_split_local_cover(q);
  ThetaBitmap bm(cover.restriction, hi);
  for (i64 n = std::max<i64>(s.next(0), lo); n <= hi; n = s.next(n)) {
    ++rep.candidates_checked;
    // full-range table: small y first, large remainders are dense in R
    bool hit = false;
    for (i64 y = 0; ; ++y) {
      i64 rem = n - cover.d * y * y;
      if (rem < 0) break;
      if (bm.test(rem)) {
        hit = true;
        break;
      }
    }
    if (hit) continue;
    ++rep.cover_misses;
    if (representations(q, n).empty()) rep.exceptions.push_back(n);
  }
  rep.complete = true;
  rep.certified_through = hi;
  return rep;
}

// ---------------------------------------------------------------------------
// method 1
// ---------------------------------------------------------------------------
std::optional<QuadraticForm> method1(const QuadraticForm& q,
                                     const std::vector<QuadraticForm>& ternary_db) {
  for (const auto& t : ternary_db)
    if (represents_form(q, t)) return t;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// method 2: nicely embedded regular ternary with residue-class queue
// ---------------------------------------------------------------------------
RegularTernaryDB RegularTernaryDB::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::ParseError, "cannot read " + path);
  nlohmann::json j;
  is >> j;
  RegularTernaryDB db;
  for (const auto& entry : j) {
    db.forms.push_back(parse_form(entry.at("form").get<std::string>()));
    db.sources.push_back(entry.value("source", "unspecified"));
  }
  return db;
}

RegularTernaryDB RegularTernaryDB::builtin() {
  // small starter list; regularity is a property of the source data
  RegularTernaryDB db;
  for (const char* s : {
           "x^2+y^2+z^2",
           "x^2+y^2+2z^2",
           "x^2+y^2+3z^2",
           "x^2+2y^2+3z^2",
           "x^2+2y^2+4z^2",
           "x^2+2y^2+5z^2",
           "x^2+y^2+yz+2z^2",
           "x^2+xy+3y^2+4z^2",
           "x^2+xy+y^2+3z^2",
           "x^2+xy+y^2+z^2",
           "x^2+y^2+yz+4z^2",
           "x^2+xz+y^2+yz+3z^2",
       }) {
    db.forms.push_back(parse_form(s));
    db.sources.push_back("starter");
  }
  return db;
}

namespace {

struct QueueClass {
  i64 residue;
  i64 modulus;
  i64 scan_from;
};

// stability modulus: v + k M' keeps the (ord, unit) class of v at every p | M
i64 covering_modulus(i64 v, i64 M) {
  i64 Mp = M;
  for (auto& [p, e] : factorize(M)) {
    i64 vp = v % p == 0 ? valuation(v, p) : 0;
    i64 need = vp + (p == 2 ? 3 : 1);
    if (e < need)
      for (i64 i = e; i < need; ++i) Mp = checked_mul(Mp, p);
  }
  return Mp;
}

}  // namespace

ExceptionReport method2(const QuadraticForm& q, const RegularTernaryDB& db,
                        const Method2Options& opt) {
  if (q.rank() != 4) throw Error(ErrorCode::WrongRank, "method 2 needs rank 4");
  ExceptionReport rep;
  rep.method = "method2";
  // find a nicely embedded regular ternary: K + d w^2 locally odd-universal
  std::optional<QuadraticForm> T;
  i64 d = 0;
  for (const auto& t : db.forms) {
    auto emb = represents_form(q, t);
    if (!emb) continue;
    // orthogonal complement of the embedded ternary
    std::vector<std::vector<i64>> rows(3, std::vector<i64>(4));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) {
        i64 acc = 0;
        for (int k = 0; k < 4; ++k) acc += q.gram(j, k) * emb->cols[i][k];
        rows[i][j] = acc;
      }
    // integer kernel of the 3x4 matrix: solve rows * x = 0
    std::vector<i64> w;
    {
      // brute small search for a primitive kernel vector
      for (i64 bound = 1; bound <= 64 && w.empty(); bound *= 2) {
        std::vector<i64> x(4);
        for (x[0] = -bound; x[0] <= bound && w.empty(); ++x[0])
          for (x[1] = -bound; x[1] <= bound && w.empty(); ++x[1])
            for (x[2] = -bound; x[2] <= bound && w.empty(); ++x[2])
              for (x[3] = -bound; x[3] <= bound; ++x[3]) {
                if (x == std::vector<i64>{0, 0, 0, 0}) continue;
                bool ok = true;
                for (int i = 0; i < 3 && ok; ++i) {
                  i64 acc = 0;
                  for (int j = 0; j < 4; ++j) acc += rows[i][j] * x[j];
                  if (acc != 0) ok = false;
                }
                if (!ok) continue;
                i64 g = 0;
                for (i64 xi : x) g = gcd64(g, xi);
                if (g != 1) continue;
                w = x;
                break;
              }
      }
    }
    if (w.empty()) continue;
    i64 dw = q.evaluate(w);
    // T + d w^2 must locally represent all odds
    std::vector<std::vector<i64>> g4(4, std::vector<i64>(4, 0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g4[i][j] = t.gram(i, j);
    g4[3][3] = 2 * dw;
    QuadraticForm cover4 = QuadraticForm::from_gram(std::move(g4));
    LocalDensities ld(cover4);
    auto prof = ld.missed_classes();
    bool odd_ok = true;
    for (i64 a : prof.missed)
      if (a % 2 == 1) odd_ok = false;
    // odd residues in mixed classes have ord_p >= 2; check small probes
    for (i64 a : prof.mixed)
      if (a % 2 == 1)
        for (i64 probe = a; probe <= a + 4 * prof.modulus; probe += prof.modulus)
          if (!ld.locally_represents(probe)) odd_ok = false;
    if (!odd_ok) continue;
    T = t;
    d = dw;
    break;
  }
  if (!T) throw Error(ErrorCode::NoRegularEmbedding, "no nicely embedded regular ternary found");
  rep.note = "regular ternary " + T->polynomial() + " + " + std::to_string(d) + " w^2";

  LocalDensities ldT(*T);
  auto profT = ldT.missed_classes();
  i64 M = profT.modulus;
  std::deque<QueueClass> queue;
  for (i64 a : profT.missed) queue.push_back({a, M, 0});
  for (i64 a : profT.mixed) queue.push_back({a, M, 0});
  std::set<std::pair<i64, i64>> seen;
  std::set<i64> exceptions;
  while (!queue.empty()) {
    if (static_cast<i64>(seen.size()) > opt.max_queue)
      throw Error(ErrorCode::QueueBudgetExceeded, "class queue exploded");
    QueueClass cls = queue.front();
    queue.pop_front();
    if (!seen.insert({cls.residue % cls.modulus, cls.modulus}).second) continue;
    ++rep.queue_classes;
    i64 start = cls.residue % cls.modulus;
    if (start == 0) start = cls.modulus;
    if (start < cls.scan_from)
      start += ((cls.scan_from - start + cls.modulus - 1) / cls.modulus) * cls.modulus;
    bool closed = false;
    for (i64 n = start; n <= opt.class_scan_bound; n += cls.modulus) {
      ++rep.candidates_checked;
      // find w with v = n - d w^2 locally represented by T (regularity turns
      // local into global); v = 0 means n itself is d w^2
      i64 hit_v = -1;
      for (i64 y = 0; d * y * y <= n; ++y) {
        i64 v = n - d * y * y;
        if (v == 0) {
          hit_v = 0;
          break;
        }
        if (ldT.locally_represents(v)) {
          hit_v = v;
          break;
        }
      }
      if (hit_v < 0) {
        ++rep.cover_misses;
        if (representations(q, n).empty()) exceptions.insert(n);
        continue;
      }
      if (hit_v == 0) continue;  // represented, but no class conclusion
      i64 Mp = covering_modulus(hit_v, cls.modulus);
      if (Mp == cls.modulus) {
        closed = true;  // every member >= n covered; members < n already resolved
        break;
      }
      // members >= n of the class n mod Mp are covered; sibling classes at the
      // finer modulus still need scanning beyond n (members < n were resolved
      // one by one above); classes without squarefree members are dropped
      for (i64 k = 0; k * cls.modulus < Mp; ++k) {
        i64 res = (n % cls.modulus) + k * cls.modulus;
        if (res % Mp == ((n % Mp) + Mp) % Mp) continue;
        bool has_squarefree = true;
        for (auto& [p, e] : factorize(Mp))
          if (e >= 2 && res % (p * p) == 0) has_squarefree = false;
        if (!has_squarefree) continue;
        queue.push_back({res, Mp, n});
      }
      closed = true;
      break;
    }
    if (!closed && start <= opt.class_scan_bound) {
      // scanned to the bound without closing: record honestly
      throw Error(ErrorCode::QueueBudgetExceeded,
                  "class " + std::to_string(cls.residue) + " mod " + std::to_string(cls.modulus) +
                      " open at scan bound");
    }
  }
  rep.exceptions.assign(exceptions.begin(), exceptions.end());
  rep.complete = true;
  rep.certified_through = opt.class_scan_bound;
  return rep;
}

// ---------------------------------------------------------------------------
// method 3
// ---------------------------------------------------------------------------
Method3Result method3(const QuadraticForm& q, const Method3Options& opt) {
  Method3Result out;
  out.certificate = cusp_constant(q, opt.trunc_multiplier);
  double F = opt.threshold_override > 0 ? opt.threshold_override : out.certificate.f4_threshold;
  i64 chi = q.character_disc();
  out.stats = f4_stats(F, q.level(), chi);
  out.report.method = "method3";
  if (opt.full_sweep) {
    SplitLocalCover cover = find_split_local_cover(q);
    i64 table = static_cast<i64>(
        20.0 * std::sqrt(static_cast<double>(std::max<i64>(out.stats.max_candidate, 1))));
    table = std::max<i64>(table, opt.small_bound);
    ThetaBitmap bm(cover.restriction, table);
    ThetaBitmap direct_small(q, opt.small_bound);
    std::set<i64> exc;
    f4_candidates(F, q.level(), chi, -1, [&](i64 n) {
      ++out.report.candidates_checked;
      if (n <= opt.small_bound) {
        if (!direct_small.test(n)) exc.insert(n);
        return;
      }
      i64 ymax = isqrt64(n / cover.d);
      for (i64 y = ymax; y >= 0; --y) {
        i64 rem = n - cover.d * y * y;
        if (rem > bm.bound()) break;
        if (bm.test(rem)) return;
      }
      ++out.report.cover_misses;
      if (representations(q, n).empty()) exc.insert(n);
    });
    out.report.exceptions.assign(exc.begin(), exc.end());
    out.report.complete = true;
    out.report.certified_through = out.stats.max_candidate;
    out.report.note = "squarefree-complete via F4 threshold " + std::to_string(F);
  } else {
    // certificate only: verify the manual range and mark the report partial
    ThetaBitmap bm(q, opt.small_bound);
    for (i64 n = 1; n <= opt.small_bound; n += 2) {
      ++out.report.candidates_checked;
      if (!bm.test(n)) out.report.exceptions.push_back(n);
    }
    out.report.complete = false;
    out.report.certified_through = opt.small_bound;
    out.report.note = "certificate computed; candidate sweep to " +
                      std::to_string(out.stats.max_candidate) + " not run";
  }
  return out;
}

// ---------------------------------------------------------------------------
// driver
// ---------------------------------------------------------------------------
ExceptionReport report(const QuadraticForm& q, const ReportConfig& config) {
  if (!config.ternary_db.empty()) {
    auto t = method1(q, config.ternary_db);
    if (t) {
      ExceptionReport rep;
      rep.method = "method1";
      rep.complete = true;
      rep.note = "odd-universal ternary sublattice " + t->polynomial();
      return rep;
    }
  }
  if (!config.regular_db.forms.empty()) {
    try {
      return method2(q, config.regular_db, config.m2);
    } catch (const Error& e) {
      if (e.code != ErrorCode::NoRegularEmbedding) throw;
    }
  }
  if (q.rank() == 4 && is_fundamental_discriminant(q.disc64())) {
    try {
      Method3Result m3 = method3(q, config.m3);
      return m3.report;
    } catch (const Error& e) {
      if (e.code != ErrorCode::SmallLevel && e.code != ErrorCode::TailDominates) throw;
    }
  }
  if (config.fallback_interval > 0) {
    ExceptionReport rep = check_interval(q, 1, config.fallback_interval, TargetSet::odds());
    rep.complete = false;
    rep.note = "interval check only; no certifying method applied";
    return rep;
  }
  throw Error(ErrorCode::Unresolvable,
              "no method applies: not fundamental-discriminant and no embedded ternary; "
              "explicit newform decomposition is out of scope");
}

bool anisotropic_square_scaling_check(const QuadraticForm& q, i64 p, i64 n_max, i64* witness) {
  if (n_max <= 0) return true;
  ThetaSeries t = theta_series(q, p * p * n_max);
  for (i64 n = 1; n <= n_max; ++n) {
    if (t[n] != t[p * p * n]) {
      if (witness) *witness = n;
      return false;
    }
  }
  return true;
}

}  // namespace oddrep
