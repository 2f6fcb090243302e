#include "oddrep/escalation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"
#include "oddrep/isometry.hpp"
#include "oddrep/local.hpp"
#include "oddrep/theta.hpp"

namespace oddrep {

TargetSet TargetSet::odds() {
  TargetSet s;
  s.name = "odds";
  s.contains = [](i64 n) { return n > 0 && n % 2 == 1; };
  s.next = [](i64 n) { return n <= 0 ? 1 : (n % 2 == 1 ? n + 2 : n + 1); };
  return s;
}

TargetSet TargetSet::residues(i64 modulus, std::vector<i64> classes) {
  std::sort(classes.begin(), classes.end());
  TargetSet s;
  s.name = "mod" + std::to_string(modulus);
  s.contains = [=](i64 n) {
    if (n <= 0) return false;
    i64 r = ((n % modulus) + modulus) % modulus;
    return std::binary_search(classes.begin(), classes.end(), r);
  };
  s.next = [=](i64 n) {
    i64 m = n + 1;
    while (!(m > 0 && std::binary_search(classes.begin(), classes.end(), m % modulus))) ++m;
    return m;
  };
  return s;
}

TruantResult truant(const QuadraticForm& q, const TargetSet& s, i64 bound) {
  TruantResult res;
  res.checked_through = bound;
  if (q.rank() == 0) {
    i64 first = s.next(0);
    if (first <= bound) res.truant = first;
    return res;
  }
  ThetaSeries t = theta_series(q, bound);
  for (i64 m = s.next(0); m <= bound; m = s.next(m)) {
    if (t[m] == 0) {
      res.truant = m;
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// escalation step
// ---------------------------------------------------------------------------
namespace {

struct InvariantKey {
  Int disc;
  i64 level;
  std::vector<i64> theta_prefix;
  bool operator<(const InvariantKey& o) const {
    if (disc != o.disc) return disc < o.disc;
    if (level != o.level) return level < o.level;
    return theta_prefix < o.theta_prefix;
  }
};

InvariantKey invariant_key(const QuadraticForm& q) {
  InvariantKey k;
  k.disc = q.disc();
  k.level = q.level();
  auto t = theta_series(q, 24);
  k.theta_prefix = t.coeff;
  return k;
}

// class-deduplicating accumulator
class ClassSet {
 public:
  // returns true when the form was new
  bool insert(const QuadraticForm& raw) {
    QuadraticForm red = reduce(raw);
    InvariantKey key = invariant_key(red);
    auto& bucket = buckets_[key];
    for (const auto& idx : bucket)
      if (is_isometric(forms_[idx], red)) return false;
    bucket.push_back(forms_.size());
    forms_.push_back(std::move(red));
    return true;
  }
  const std::vector<QuadraticForm>& forms() const { return forms_; }

 private:
  std::map<InvariantKey, std::vector<size_t>> buckets_;
  std::vector<QuadraticForm> forms_;
};

}  // namespace

std::vector<QuadraticForm> escalations(const QuadraticForm& q, i64 t) {
  if (t < 1) throw Error(ErrorCode::NonPositiveArgument, "escalation norm must be positive");
  QuadraticForm parent = q.rank() > 0 ? reduce(q) : q;
  int n = parent.rank();
  ClassSet classes;
  if (n == 0) {
    classes.insert(QuadraticForm::from_gram({{2 * t}}));
    return classes.forms();
  }
  // Cauchy-Schwarz box on the reduced basis: |A_{i,n}| = |2<e_i,v>| <= 2 sqrt(Q(e_i) t)
  std::vector<i64> box(n);
  for (int i = 0; i < n; ++i) box[i] = isqrt64(4 * (parent.gram(i, i) / 2) * t);
  std::vector<i64> b(n, 0);
  std::vector<std::vector<i64>> g(n + 1, std::vector<i64>(n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = parent.gram(i, j);
  g[n][n] = 2 * t;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      for (int k = 0; k < n; ++k) g[k][n] = g[n][k] = b[k];
      // bordered determinant positive <=> positive definite (parent is PD)
      std::vector<std::vector<Int>> big(n + 1, std::vector<Int>(n + 1));
      for (int r = 0; r <= n; ++r)
        for (int c = 0; c <= n; ++c) big[r][c] = g[r][c];
      if (det_int(big) > 0) classes.insert(QuadraticForm::from_gram(g));
      return;
    }
    for (b[i] = -box[i]; b[i] <= box[i]; ++b[i]) rec(i + 1);
  };
  rec(0);
  return classes.forms();
}

// ---------------------------------------------------------------------------
// tree construction
// ---------------------------------------------------------------------------
i64 EscalationTree::merged_count(int d) const {
  i64 c = 0;
  for (const auto& node : layers[d])
    if (node.status != EscalatorNode::Status::LocallyDeficient) ++c;
  return c;
}

namespace {

EscalatorNode classify(QuadraticForm form, int parent, bool auxiliary, const TargetSet& s,
                       i64 bound) {
  EscalatorNode node;
  node.form = std::move(form);
  node.parent = parent;
  node.auxiliary = auxiliary;
  TruantResult tr = truant(node.form, s, bound);
  if (!tr.truant) {
    node.status = EscalatorNode::Status::UniversalUpTo;
    node.checked_through = tr.checked_through;
    return node;
  }
  node.truant = *tr.truant;
  node.status = EscalatorNode::Status::Truant;
  return node;
}

// least member of S not locally represented, scanned up to bound; the truant
// is checked first since s < truant is represented and a fortiori locally so
std::optional<i64> smallest_locally_missed(const EscalatorNode& node, const TargetSet& s,
                                           i64 bound) {
  if (node.status == EscalatorNode::Status::UniversalUpTo) {
    LocalDensities ld(node.form);
    for (i64 m = s.next(0); m <= bound; m = s.next(m))
      if (!ld.locally_represents(m)) return m;
    return std::nullopt;
  }
  LocalDensities ld(node.form);
  if (!ld.locally_represents(node.truant)) return node.truant;
  for (i64 m = s.next(node.truant); m <= bound; m = s.next(m))
    if (!ld.locally_represents(m)) return m;
  return std::nullopt;
}

}  // namespace

EscalationTree build_tree(const TargetSet& s, int max_dim, const BuildOptions& opt) {
  if (max_dim > 5) throw Error(ErrorCode::NonPositiveArgument, "max_dim > 5 unsupported");
  EscalationTree tree;
  tree.target = s;
  tree.node_bound = opt.node_bound;
  tree.layers.resize(max_dim + 1);
  tree.layers[0].push_back(classify(QuadraticForm::zero(), -1, false, s, opt.node_bound));
  for (int d = 0; d < max_dim; ++d) {
    ClassSet next;
    std::vector<int> parents;  // parallel to next.forms()
    std::vector<bool> aux_flag;
    auto add_children = [&](const QuadraticForm& from, i64 t, int parent_idx, bool aux) {
      for (const auto& child : escalations(from, t)) {
        if (next.insert(child)) {
          parents.push_back(parent_idx);
          aux_flag.push_back(aux);
        }
      }
    };
    for (size_t i = 0; i < tree.layers[d].size(); ++i) {
      const auto& node = tree.layers[d][i];
      if (node.status == EscalatorNode::Status::Truant)
        add_children(node.form, node.truant, static_cast<int>(i), false);
    }
    std::vector<EscalatorNode> layer;
    for (size_t i = 0; i < next.forms().size(); ++i)
      layer.push_back(classify(next.forms()[i], parents[i], aux_flag[i], s, opt.node_bound));
    // The quaternary layer is the certification dimension: nodes that fail to
    // locally represent all of S cannot have their exceptions determined, so
    // their ternary parents are escalated by the smallest locally missed
    // member instead (auxiliary escalators). Lower layers escalate through
    // their truants regardless of local misses.
    if (opt.auxiliaries && d + 1 == 4) {
      std::set<std::pair<std::vector<std::vector<i64>>, i64>> seen;
      size_t basic_count = layer.size();
      for (size_t i = 0; i < basic_count; ++i) {
        auto miss = smallest_locally_missed(layer[i], s, opt.node_bound);
        if (!miss) continue;
        layer[i].status = EscalatorNode::Status::LocallyDeficient;
        layer[i].truant = *miss;
        int p = layer[i].parent;
        if (p < 0) continue;
        const QuadraticForm& parent_form = tree.layers[d][p].form;
        if (!seen.insert({parent_form.gram_matrix(), *miss}).second) continue;
        size_t before = next.forms().size();
        add_children(parent_form, *miss, p, true);
        for (size_t k = before; k < next.forms().size(); ++k)
          layer.push_back(classify(next.forms()[k], parents[k], true, s, opt.node_bound));
      }
    }
    tree.layers[d + 1] = std::move(layer);
    if (!opt.checkpoint_path.empty()) save_tree(tree, opt.checkpoint_path);
  }
  return tree;
}

std::vector<i64> critical_integers(const EscalationTree& tree) {
  std::set<i64> out;
  for (const auto& layer : tree.layers)
    for (const auto& node : layer)
      if (node.status != EscalatorNode::Status::UniversalUpTo) out.insert(node.truant);
  return {out.begin(), out.end()};
}

std::vector<QuadraticForm> kaplansky_candidates(const EscalationTree& tree, i64 check_bound) {
  if (tree.layers.size() < 4)
    throw Error(ErrorCode::NonPositiveArgument, "tree has no dimension-3 layer");
  std::vector<QuadraticForm> out;
  for (const auto& node : tree.layers[3]) {
    TruantResult tr = truant(node.form, tree.target, check_bound);
    if (!tr.truant) out.push_back(node.form);
  }
  return out;
}

// ---------------------------------------------------------------------------
// persistence: JSONL, one node per line
// ---------------------------------------------------------------------------
void save_tree(const EscalationTree& tree, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::ParseError, "cannot write " + path);
  for (size_t d = 0; d < tree.layers.size(); ++d) {
    for (const auto& node : tree.layers[d]) {
      nlohmann::json j;
      j["dim"] = d;
      j["gram"] = node.form.gram_matrix();
      j["parent"] = node.parent;
      j["aux"] = node.auxiliary;
      switch (node.status) {
        case EscalatorNode::Status::Truant:
          j["status"] = "truant";
          j["truant"] = node.truant;
          break;
        case EscalatorNode::Status::UniversalUpTo:
          j["status"] = "universal-up-to";
          j["bound"] = node.checked_through;
          break;
        case EscalatorNode::Status::LocallyDeficient:
          j["status"] = "locally-deficient";
          j["truant"] = node.truant;
          break;
      }
      os << j.dump() << "\n";
    }
  }
}

std::optional<EscalationTree> load_tree(const std::string& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  EscalationTree tree;
  tree.target = TargetSet::odds();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    size_t d = j["dim"].get<size_t>();
    if (tree.layers.size() <= d) tree.layers.resize(d + 1);
    EscalatorNode node;
    node.form = QuadraticForm::from_gram(j["gram"].get<std::vector<std::vector<i64>>>());
    node.parent = j["parent"].get<int>();
    node.auxiliary = j["aux"].get<bool>();
    std::string st = j["status"].get<std::string>();
    if (st == "truant") {
      node.status = EscalatorNode::Status::Truant;
      node.truant = j["truant"].get<i64>();
    } else if (st == "locally-deficient") {
      node.status = EscalatorNode::Status::LocallyDeficient;
      node.truant = j["truant"].get<i64>();
    } else {
      node.status = EscalatorNode::Status::UniversalUpTo;
      node.checked_through = j["bound"].get<i64>();
    }
    tree.layers[d].push_back(std::move(node));
  }
  return tree;
}

// ---------------------------------------------------------------------------
// known truants (acceptance data)
// ---------------------------------------------------------------------------
const std::vector<TruantTableRow>& truant_table() {
  static const std::vector<TruantTableRow> rows = {
      {"", 1},
      {"x^2", 3},
      {"x^2+2y^2", 5},
      {"x^2+3y^2+xy", 7},
      {"x^2+3y^2+4z^2+yz", 11},
      {"x^2+3y^2+6z^2+xy+yz", 13},
      {"x^2+y^2+3z^2", 15},
      {"x^2+2y^2+3z^2+xy+xz+2yz", 17},
      {"x^2+3y^2+7z^2+xy+yz", 19},
      {"x^2+3y^2+3z^2+xy+xz+2yz", 21},
      {"x^2+2y^2+3z^2+yz", 23},
      {"x^2+3y^2+3z^2+xy", 29},
      {"x^2+2y^2+4z^2+yz", 31},
      {"x^2+3y^2+4z^2+10w^2+2yw", 33},
      {"x^2+3y^2+5z^2+3yz", 35},
      {"x^2+2y^2+5z^2+12w^2+xz+xw+yz+3zw", 37},
      {"x^2+3y^2+5z^2+13w^2+xy+xz+yz", 39},
      {"x^2+3y^2+4z^2+xz+2yz", 41},
      {"x^2+3y^2+5z^2+15w^2+xw+yz+2yw+2zw", 47},
      {"x^2+3y^2+4z^2+15w^2+xw+3yz+zw", 51},
      {"x^2+3y^2+5z^2+21w^2+xz+2yz+yw+4zw", 53},
      {"x^2+3y^2+7z^2+9w^2+xy+2yw", 57},
      {"x^2+3y^2+5z^2+16w^2+yz+2yw+3zw", 59},
      {"x^2+y^2+3z^2+yz", 77},
      {"x^2+3y^2+5z^2+21w^2+3yz", 83},
      {"x^2+3y^2+5z^2+23w^2+xw+3yz+4zw", 85},
      {"x^2+3y^2+5z^2+9w^2+xz+3yw", 87},
      {"x^2+3y^2+5z^2+27w^2+xz+2yz+yw+2zw", 89},
      {"x^2+3y^2+7z^2+9w^2+21v^2+xy+yw+7zv", 91},
      {"x^2+2y^2+4z^2+28w^2+yz+zw", 93},
      {"x^2+3y^2+4z^2+11w^2+xw+2zw", 105},
      {"x^2+3y^2+5z^2+31w^2+3yz+3yw", 119},
      {"x^2+3y^2+4z^2+9w^2+3yw", 123},
      {"x^2+3y^2+7z^2+19w^2+57v^2+xy+yz+17wv", 133},
      {"x^2+3y^2+5z^2+26w^2+xw+3yz+3zw", 137},
      {"x^2+y^2+3z^2+47w^2+xw+yz", 143},
      {"x^2+3y^2+3z^2+29w^2+xy+2yz", 145},
      {"x^2+3y^2+3z^2+20w^2+xy+3zw", 187},
      {"x^2+3y^2+6z^2+13w^2+xy+yz", 195},
      {"x^2+2y^2+4z^2+29w^2+58v^2+xz+yz", 203},
      {"x^2+3y^2+4z^2+41w^2+xz+2yz", 205},
      {"x^2+y^2+3z^2+36w^2+xw+yz", 209},
      {"x^2+3y^2+4z^2+77w^2+143v^2+xy+15wv", 231},
      {"x^2+3y^2+4z^2+33w^2+xy", 319},
      {"x^2+3y^2+4z^2+77w^2+143v^2+xy+22wv", 385},
      {"x^2+3y^2+4z^2+77w^2+143v^2+xy+33wv", 451},
  };
  return rows;
}

}  // namespace oddrep
