#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace roadrisk::bbn {

enum class Provenance { paper, reconstructed };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view text);

// Conditional probability table.
//
// `table` has one row per child state and one column per parent-state
// combination. Columns enumerate parent combinations row-major over the
// declared parent order (first parent slowest). A root node has exactly one
// column holding its prior.
struct Cpt {
  Eigen::MatrixXd table;
  std::vector<Provenance> provenance;  // one tag per column

  Cpt() = default;
  Cpt(Eigen::MatrixXd t, std::vector<Provenance> tags)
      : table(std::move(t)), provenance(std::move(tags)) {}

  // Builds a table from column vectors, all tagged with `tag`.
  static Cpt from_columns(const std::vector<std::vector<double>>& columns,
                          Provenance tag = Provenance::paper);

  Eigen::Index num_columns() const { return table.cols(); }
  Eigen::Index num_states() const { return table.rows(); }

  friend bool operator==(const Cpt& a, const Cpt& b) {
    return a.provenance == b.provenance && a.table.rows() == b.table.rows() &&
           a.table.cols() == b.table.cols() && a.table == b.table;
  }
};

struct Node {
  std::string id;
  std::string label;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  Cpt cpt;

  std::optional<std::size_t> state_index(std::string_view state) const;

  friend bool operator==(const Node&, const Node&) = default;
};

using Metadata = std::map<std::string, std::string>;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// Immutable DAG of discrete chance nodes.
//
// Construction never throws on content problems: a Network can hold
// duplicate ids, dangling parents or cycles so that validate_network can
// report them. Inference entry points refuse networks with fatal findings.
class Network {
 public:
  Network() = default;
  Network(std::string name, std::vector<Node> nodes, Metadata metadata = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Metadata& metadata() const noexcept { return metadata_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const Node& operator[](std::size_t i) const { return nodes_[i]; }

  // First node declared with this id.
  std::optional<std::size_t> find(std::string_view id) const;
  // Throws InvalidReference naming the id.
  std::size_t index_of(std::string_view id) const;
  const Node& node(std::string_view id) const { return nodes_[index_of(id)]; }

  // Parent indices in declared order; npos for a dangling reference.
  const std::vector<std::size_t>& parent_indices(std::size_t i) const {
    return parent_index_[i];
  }
  std::size_t cardinality(std::size_t i) const { return nodes_[i].states.size(); }

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.nodes_ == b.nodes_ && a.metadata_ == b.metadata_;
  }

 private:
  std::string name_;
  std::vector<Node> nodes_;
  Metadata metadata_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parent_index_;
};

// Partial assignment of nodes to observed states, keyed by node id.
class Evidence {
 public:
  using Map = std::map<std::string, std::string>;

  Evidence() = default;
  Evidence(std::initializer_list<Map::value_type> init) : assignments_(init) {}
  explicit Evidence(Map m) : assignments_(std::move(m)) {}

  // Replaces any previous observation of `node`.
  void set(std::string node, std::string state) {
    assignments_[std::move(node)] = std::move(state);
  }
  bool contains(std::string_view node) const {
    return assignments_.find(std::string(node)) != assignments_.end();
  }
  bool empty() const noexcept { return assignments_.empty(); }
  std::size_t size() const noexcept { return assignments_.size(); }
  const Map& assignments() const noexcept { return assignments_; }

  // Union; entries of `other` win on conflict.
  Evidence merged(const Evidence& other) const;

  // Per-node observed state index (npos when unobserved). Throws
  // InvalidReference for unknown nodes or states.
  std::vector<std::size_t> resolve(const Network& net) const;

  friend bool operator==(const Evidence&, const Evidence&) = default;

 private:
  Map assignments_;
};

// Posterior over one node's states, in declared state order.
struct Distribution {
  std::string node;
  std::vector<std::string> states;
  Eigen::VectorXd probabilities;

  // Throws InvalidReference for an undeclared state.
  double operator[](std::string_view state) const;
};

}  // namespace roadrisk::bbn
