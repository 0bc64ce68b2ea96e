#include "roadrisk/bbn/network.hpp"

#include <algorithm>

#include "roadrisk/bbn/errors.hpp"

namespace roadrisk::bbn {

std::string_view to_string(Provenance p) {
  return p == Provenance::paper ? "paper" : "reconstructed";
}

std::optional<Provenance> parse_provenance(std::string_view text) {
  if (text == "paper") return Provenance::paper;
  if (text == "reconstructed") return Provenance::reconstructed;
  return std::nullopt;
}

Cpt Cpt::from_columns(const std::vector<std::vector<double>>& columns, Provenance tag) {
  const auto rows = columns.empty() ? 0 : columns.front().size();
  Eigen::MatrixXd t(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw std::invalid_argument("ragged CPT columns");
    for (std::size_t i = 0; i < rows; ++i) {
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = columns[j][i];
    }
  }
  return Cpt(std::move(t), std::vector<Provenance>(columns.size(), tag));
}

std::optional<std::size_t> Node::state_index(std::string_view state) const {
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

Network::Network(std::string name, std::vector<Node> nodes, Metadata metadata)
    : name_(std::move(name)), nodes_(std::move(nodes)), metadata_(std::move(metadata)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.try_emplace(nodes_[i].id, i);
  parent_index_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (const auto& p : nodes_[i].parents) {
      const auto it = index_.find(p);
      parent_index_[i].push_back(it == index_.end() ? npos : it->second);
    }
  }
}

std::optional<std::size_t> Network::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Network::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InvalidReference("unknown node '" + std::string(id) + "'");
}

Evidence Evidence::merged(const Evidence& other) const {
  Evidence out = *this;
  for (const auto& [node, state] : other.assignments_) out.assignments_[node] = state;
  return out;
}

std::vector<std::size_t> Evidence::resolve(const Network& net) const {
  std::vector<std::size_t> observed(net.size(), npos);
  for (const auto& [node, state] : assignments_) {
    const std::size_t i = net.index_of(node);
    const auto s = net[i].state_index(state);
    if (!s) {
      throw InvalidReference("unknown state '" + state + "' for node '" + node + "'");
    }
    observed[i] = *s;
  }
  return observed;
}

double Distribution::operator[](std::string_view state) const {
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) {
    throw InvalidReference("unknown state '" + std::string(state) + "' for node '" + node + "'");
  }
  return probabilities(it - states.begin());
}

}  // namespace roadrisk::bbn
