#include "oddrep/form.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace oddrep {

double to_double(const Rat& r) { return r.convert_to<double>(); }

i64 to_i64(const Int& n) {
  if (n > std::numeric_limits<i64>::max() || n < std::numeric_limits<i64>::min())
    throw Error(ErrorCode::Overflow, "value exceeds 64 bits");
  return n.convert_to<i64>();
}

Int det_int(const std::vector<std::vector<Int>>& m) {
  // Bareiss fraction-free elimination
  size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<Int>> a = m;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<std::vector<Int>> adjugate_int(const std::vector<std::vector<Int>>& m) {
  size_t n = m.size();
  std::vector<std::vector<Int>> adj(n, std::vector<Int>(n));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  std::vector<std::vector<Int>> minor(n - 1, std::vector<Int>(n - 1));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      size_t r = 0;
      for (size_t ii = 0; ii < n; ++ii) {
        if (ii == i) continue;
        size_t c = 0;
        for (size_t jj = 0; jj < n; ++jj) {
          if (jj == j) continue;
          minor[r][c++] = m[ii][jj];
        }
        ++r;
      }
      Int cof = det_int(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      adj[j][i] = cof;  // transpose of cofactor matrix
    }
  return adj;
}

namespace {

std::vector<std::vector<Int>> to_big(const std::vector<std::vector<i64>>& g) {
  std::vector<std::vector<Int>> b(g.size(), std::vector<Int>(g.size()));
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) b[i][j] = g[i][j];
  return b;
}

// least N with N*A^{-1} integral and even diagonal
i64 compute_level(const std::vector<std::vector<i64>>& g, const Int& det) {
  size_t n = g.size();
  if (n == 0) return 1;
  auto adj = adjugate_int(to_big(g));
  Int L = det;  // positive for our forms
  Int N = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Int need = (i == j) ? 2 * L : L;  // diagonal: 2L | N*adj_ii
      Int a = adj[i][j];
      if (a < 0) a = -a;
      Int gq = boost::multiprecision::gcd(need, a);
      Int ni = need / gq;
      N = boost::multiprecision::lcm(N, ni);
    }
  return to_i64(N);
}

}  // namespace

QuadraticForm QuadraticForm::from_gram(std::vector<std::vector<i64>> gram) {
  size_t n = gram.size();
  for (size_t i = 0; i < n; ++i)
    if (gram[i].size() != n)
      throw Error(ErrorCode::NotSymmetric, "gram matrix not square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (gram[i][j] != gram[j][i])
        throw Error(ErrorCode::NotSymmetric,
                    "gram[" + std::to_string(i) + "][" + std::to_string(j) + "] != transpose");
  for (size_t i = 0; i < n; ++i)
    if (gram[i][i] % 2 != 0)
      throw Error(ErrorCode::OddDiagonal, "odd diagonal entry at index " + std::to_string(i));
  // leading principal minors strictly positive
  auto big = to_big(gram);
  for (size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Int>> mk(k, std::vector<Int>(k));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) mk[i][j] = big[i][j];
    if (det_int(mk) <= 0)
      throw Error(ErrorCode::NotPositiveDefinite,
                  "leading principal minor " + std::to_string(k) + " not positive");
  }
  QuadraticForm q;
  q.gram_ = std::move(gram);
  q.disc_ = n == 0 ? Int(1) : det_int(big);
  q.level_ = compute_level(q.gram_, q.disc_);
  return q;
}

QuadraticForm QuadraticForm::zero() { return from_gram({}); }

i64 QuadraticForm::character_disc() const {
  // chi_D with D = (-1)^(r/2) det A for even rank, 2*det A for odd rank
  if (rank() % 2 == 0) {
    Int d = disc_;
    if (rank() % 4 == 2) d = -d;
    return to_i64(d);
  }
  return to_i64(2 * disc_);
}

QuadraticForm QuadraticForm::dual() const {
  auto adj = adjugate_int(to_big(gram_));
  Int N = level_;
  std::vector<std::vector<i64>> g(rank(), std::vector<i64>(rank()));
  for (int i = 0; i < rank(); ++i)
    for (int j = 0; j < rank(); ++j) {
      Int v = N * adj[i][j];
      if (v % disc_ != 0)
        throw Error(ErrorCode::Overflow, "level does not clear denominators");
      g[i][j] = to_i64(v / disc_);
    }
  return from_gram(std::move(g));
}

CholeskyData QuadraticForm::cholesky() const {
  int n = rank();
  CholeskyData cd;
  cd.diag.assign(n, Rat(0));
  cd.unitri.assign(n, std::vector<Rat>(n, Rat(0)));
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i) {
    cd.unitri[i][i] = 1;
    for (int j = 0; j < n; ++j) a[i][j] = gram_[i][j];
  }
  for (int i = 0; i < n; ++i) {
    cd.diag[i] = a[i][i];
    for (int j = i + 1; j < n; ++j) cd.unitri[i][j] = a[i][j] / a[i][i];
    for (int k = i + 1; k < n; ++k)
      for (int l = i + 1; l < n; ++l)
        a[k][l] -= a[i][k] * a[i][l] / a[i][i];
  }
  return cd;
}

i64 QuadraticForm::evaluate(const std::vector<i64>& x) const {
  i64 acc = 0;
  int n = rank();
  for (int i = 0; i < n; ++i) {
    acc = checked_add(acc, checked_mul(gram_[i][i] / 2, checked_mul(x[i], x[i])));
    for (int j = i + 1; j < n; ++j)
      acc = checked_add(acc, checked_mul(gram_[i][j], checked_mul(x[i], x[j])));
  }
  return acc;
}

Int QuadraticForm::evaluate_big(const std::vector<Int>& x) const {
  Int acc = 0;
  int n = rank();
  for (int i = 0; i < n; ++i) {
    acc += Int(gram_[i][i] / 2) * x[i] * x[i];
    for (int j = i + 1; j < n; ++j) acc += Int(gram_[i][j]) * x[i] * x[j];
  }
  return acc;
}

bool QuadraticForm::operator<(const QuadraticForm& o) const {
  if (rank() != o.rank()) return rank() < o.rank();
  return gram_ < o.gram_;
}

namespace {
const char kVarNames[] = {'x', 'y', 'z', 'w', 'v', 'u'};
int var_index(char c) {
  for (int i = 0; i < 6; ++i)
    if (kVarNames[i] == c) return i;
  return -1;
}
}  // namespace

std::string QuadraticForm::polynomial() const {
  if (rank() == 0) return "0";
  std::ostringstream os;
  bool first = true;
  auto term = [&](i64 c, const std::string& mono) {
    if (c == 0) return;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    i64 a = c < 0 ? -c : c;
    if (a != 1) os << a << "*";
    os << mono;
  };
  for (int i = 0; i < rank(); ++i) {
    term(gram_[i][i] / 2, std::string(1, kVarNames[i]) + "^2");
    for (int j = i + 1; j < rank(); ++j)
      term(gram_[i][j], std::string(1, kVarNames[i]) + "*" + kVarNames[j]);
  }
  if (first) os << "0";
  return os.str();
}

std::string QuadraticForm::gram_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rank(); ++i) {
    os << (i ? "," : "") << "[";
    for (int j = 0; j < rank(); ++j) os << (j ? "," : "") << gram_[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------
namespace {

QuadraticForm parse_polynomial(const std::string& s) {
  // terms: [+-] [coeff] [*]? var [^2 | [*]? var]
  int maxvar = -1;
  struct Term {
    i64 coeff;
    int v1, v2;  // v2 == -1 for none (constant not allowed)
  };
  std::vector<Term> terms;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  bool expect_term = true;
  int sign = 1;
  while (i < s.size()) {
    skip_ws();
    if (i >= s.size()) break;
    char c = s[i];
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      ++i;
      expect_term = true;
      continue;
    }
    if (!expect_term) throw Error(ErrorCode::ParseError, "expected + or - in form expression");
    i64 coeff = 1;
    skip_ws();
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coeff = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        coeff = checked_add(checked_mul(coeff, 10), s[i++] - '0');
    }
    skip_ws();
    if (i < s.size() && s[i] == '*') {
      ++i;
      skip_ws();
    }
    if (i >= s.size() || var_index(s[i]) < 0)
      throw Error(ErrorCode::ParseError, "expected variable in form expression at offset " +
                                             std::to_string(i));
    int v1 = var_index(s[i++]);
    int v2 = -1;
    skip_ws();
    if (i < s.size() && s[i] == '^') {
      ++i;
      skip_ws();
      if (i >= s.size() || s[i] != '2')
        throw Error(ErrorCode::ParseError, "only exponent 2 supported");
      ++i;
      v2 = v1;
    } else {
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip_ws();
      }
      if (i < s.size() && var_index(s[i]) >= 0) v2 = var_index(s[i++]);
    }
    if (v2 < 0) throw Error(ErrorCode::ParseError, "linear terms not allowed in a quadratic form");
    maxvar = std::max({maxvar, v1, v2});
    terms.push_back({sign * coeff, v1, v2});
    sign = 1;
    expect_term = false;
  }
  if (maxvar < 0) throw Error(ErrorCode::ParseError, "empty form expression");
  int n = maxvar + 1;
  std::vector<std::vector<i64>> g(n, std::vector<i64>(n, 0));
  for (auto& t : terms) {
    if (t.v1 == t.v2)
      g[t.v1][t.v1] = checked_add(g[t.v1][t.v1], checked_mul(2, t.coeff));
    else {
      g[t.v1][t.v2] = checked_add(g[t.v1][t.v2], t.coeff);
      g[t.v2][t.v1] = g[t.v1][t.v2];
    }
  }
  return QuadraticForm::from_gram(std::move(g));
}

}  // namespace

QuadraticForm parse_form(const std::string& text) {
  size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') {
    auto j = nlohmann::json::parse(text);
    if (!j.contains("gram")) throw Error(ErrorCode::ParseError, "missing \"gram\" key");
    std::vector<std::vector<i64>> g = j["gram"].get<std::vector<std::vector<i64>>>();
    return QuadraticForm::from_gram(std::move(g));
  }
  return parse_polynomial(text);
}

std::string form_to_json(const QuadraticForm& q) {
  nlohmann::json j;
  j["gram"] = q.gram_matrix();
  return j.dump();
}

}  // namespace oddrep
