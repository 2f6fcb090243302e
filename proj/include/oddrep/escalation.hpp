#ifndef ODDREP_ESCALATION_HPP
#define ODDREP_ESCALATION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oddrep/form.hpp"

namespace oddrep {

// Ordered set of target integers (default: positive odds ascending).
struct TargetSet {
  std::string name;
  std::function<bool(i64)> contains;
  std::function<i64(i64)> next;  // least member > n
  static TargetSet odds();
  static TargetSet residues(i64 modulus, std::vector<i64> classes);  // ascending members
};

struct TruantResult {
  std::optional<i64> truant;  // least member of S not represented
  i64 checked_through = 0;    // certified bound when no truant was found
};

TruantResult truant(const QuadraticForm& q, const TargetSet& s, i64 bound);

// all positive-definite escalations of q by a vector of norm t, up to isometry
std::vector<QuadraticForm> escalations(const QuadraticForm& q, i64 t);

struct EscalatorNode {
  QuadraticForm form;          // reduced representative
  int parent = -1;             // index into the previous layer
  bool auxiliary = false;
  enum class Status { Truant, UniversalUpTo, LocallyDeficient } status = Status::UniversalUpTo;
  i64 truant = 0;              // valid for Truant and LocallyDeficient
  i64 checked_through = 0;     // valid for UniversalUpTo
};

struct EscalationTree {
  TargetSet target;
  i64 node_bound = 10000;                       // per-node universality bound
  std::vector<std::vector<EscalatorNode>> layers;  // layers[d] = nodes of dimension d

  i64 layer_count(int d) const { return static_cast<i64>(layers[d].size()); }
  i64 merged_count(int d) const;  // auxiliaries included, deficient nodes excluded
};

struct BuildOptions {
  i64 node_bound = 10000;
  std::string checkpoint_path;  // JSONL persisted after each layer when set
  bool auxiliaries = true;
  int jobs = 1;
};

EscalationTree build_tree(const TargetSet& s, int max_dim, const BuildOptions& opt = {});

// all truants occurring in the tree, sorted ascending
std::vector<i64> critical_integers(const EscalationTree& tree);

// dimension-3 escalators with no exception in S up to check_bound
std::vector<QuadraticForm> kaplansky_candidates(const EscalationTree& tree, i64 check_bound);

// table of forms with known truants (acceptance data; last entry truant 451)
struct TruantTableRow {
  const char* form;
  i64 truant;
};
const std::vector<TruantTableRow>& truant_table();

// tree persistence
void save_tree(const EscalationTree& tree, const std::string& path);
std::optional<EscalationTree> load_tree(const std::string& path);

}  // namespace oddrep

#endif
