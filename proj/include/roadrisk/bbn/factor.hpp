#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace roadrisk::bbn {

using VarId = std::size_t;

// Dense table over an ordered scope of discrete variables.
//
// Cells are laid out row-major over the scope: the first variable varies
// slowest, the last fastest. An empty scope holds a single scalar cell.
template <typename Scalar>
class BasicFactor {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicFactor() : values_(Values::Ones(1)) {}

  BasicFactor(std::vector<VarId> scope, std::vector<std::size_t> cards, Values values)
      : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
    if (scope_.size() != cards_.size()) {
      throw std::invalid_argument("factor scope and cardinality lists differ in length");
    }
    if (static_cast<std::size_t>(values_.size()) != table_size()) {
      throw std::invalid_argument("factor value count does not match its scope");
    }
  }

  // Unit factor: empty scope, value 1.
  static BasicFactor unit() { return BasicFactor(); }

  static BasicFactor scalar(Scalar v) {
    BasicFactor f;
    f.values_(0) = v;
    return f;
  }

  const std::vector<VarId>& scope() const noexcept { return scope_; }
  const std::vector<std::size_t>& cards() const noexcept { return cards_; }
  const Values& values() const noexcept { return values_; }
  Values& values() noexcept { return values_; }

  std::size_t table_size() const {
    std::size_t n = 1;
    for (auto c : cards_) n *= c;
    return n;
  }

  // Position of `var` in the scope, or scope().size() when absent.
  std::size_t position(VarId var) const {
    return static_cast<std::size_t>(std::find(scope_.begin(), scope_.end(), var) -
                                    scope_.begin());
  }
  bool contains(VarId var) const { return position(var) < scope_.size(); }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(scope_.size());
    std::size_t stride = 1;
    for (std::size_t k = scope_.size(); k-- > 0;) {
      s[k] = stride;
      stride *= cards_[k];
    }
    return s;
  }

  // Cell at a full assignment given in scope order.
  Scalar at(const std::vector<std::size_t>& assignment) const {
    const auto s = strides();
    std::size_t idx = 0;
    for (std::size_t k = 0; k < scope_.size(); ++k) idx += assignment[k] * s[k];
    return values_(static_cast<Eigen::Index>(idx));
  }

  Scalar sum() const { return values_.sum(); }

 private:
  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  Values values_;
};

using Factor = BasicFactor<double>;

// Pointwise product. The result scope is a's scope followed by the
// variables of b not already in a.
template <typename Scalar>
BasicFactor<Scalar> factor_product(const BasicFactor<Scalar>& a, const BasicFactor<Scalar>& b) {
  std::vector<VarId> scope = a.scope();
  std::vector<std::size_t> cards = a.cards();
  for (std::size_t k = 0; k < b.scope().size(); ++k) {
    if (!a.contains(b.scope()[k])) {
      scope.push_back(b.scope()[k]);
      cards.push_back(b.cards()[k]);
    } else if (a.cards()[a.position(b.scope()[k])] != b.cards()[k]) {
      throw std::invalid_argument("factor product: cardinality mismatch on shared variable");
    }
  }

  // Stride of each result variable inside each operand (0 when absent).
  const auto sa = a.strides();
  const auto sb = b.strides();
  std::vector<std::size_t> step_a(scope.size(), 0), step_b(scope.size(), 0);
  for (std::size_t k = 0; k < scope.size(); ++k) {
    if (const auto p = a.position(scope[k]); p < a.scope().size()) step_a[k] = sa[p];
    if (const auto p = b.position(scope[k]); p < b.scope().size()) step_b[k] = sb[p];
  }

  std::size_t total = 1;
  for (auto c : cards) total *= c;
  typename BasicFactor<Scalar>::Values out(static_cast<Eigen::Index>(total));

  std::vector<std::size_t> digits(scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t cell = 0; cell < total; ++cell) {
    out(static_cast<Eigen::Index>(cell)) =
        a.values()(static_cast<Eigen::Index>(ia)) * b.values()(static_cast<Eigen::Index>(ib));
    // Odometer step with incremental operand offsets.
    for (std::size_t k = scope.size(); k-- > 0;) {
      if (++digits[k] < cards[k]) {
        ia += step_a[k];
        ib += step_b[k];
        break;
      }
      ia -= step_a[k] * (cards[k] - 1);
      ib -= step_b[k] * (cards[k] - 1);
      digits[k] = 0;
    }
  }
  return BasicFactor<Scalar>(std::move(scope), std::move(cards), std::move(out));
}

// Sums `var` out of `f`. Throws std::invalid_argument when var is not in scope.
template <typename Scalar>
BasicFactor<Scalar> factor_marginalize(const BasicFactor<Scalar>& f, VarId var) {
  const std::size_t p = f.position(var);
  if (p == f.scope().size()) {
    throw std::invalid_argument("factor_marginalize: variable " + std::to_string(var) +
                                " is not in the factor scope");
  }
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t k = 0; k < f.scope().size(); ++k) {
    if (k == p) continue;
    scope.push_back(f.scope()[k]);
    cards.push_back(f.cards()[k]);
  }
  // Split the flat index as outer x card(var) x inner.
  std::size_t inner = 1;
  for (std::size_t k = p + 1; k < f.cards().size(); ++k) inner *= f.cards()[k];
  const std::size_t card = f.cards()[p];
  const std::size_t outer = f.table_size() / (inner * card);

  typename BasicFactor<Scalar>::Values out =
      BasicFactor<Scalar>::Values::Zero(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < card; ++s) {
      const auto src = static_cast<Eigen::Index>((o * card + s) * inner);
      out.segment(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) +=
          f.values().segment(src, static_cast<Eigen::Index>(inner));
    }
  }
  return BasicFactor<Scalar>(std::move(scope), std::move(cards), std::move(out));
}

// Restricts `var` to `state` and drops it from the scope. A factor without
// `var` is returned unchanged.
template <typename Scalar>
BasicFactor<Scalar> factor_reduce(const BasicFactor<Scalar>& f, VarId var, std::size_t state) {
  const std::size_t p = f.position(var);
  if (p == f.scope().size()) return f;
  if (state >= f.cards()[p]) throw std::out_of_range("factor_reduce: state index out of range");

  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  for (std::size_t k = 0; k < f.scope().size(); ++k) {
    if (k == p) continue;
    scope.push_back(f.scope()[k]);
    cards.push_back(f.cards()[k]);
  }
  std::size_t inner = 1;
  for (std::size_t k = p + 1; k < f.cards().size(); ++k) inner *= f.cards()[k];
  const std::size_t card = f.cards()[p];
  const std::size_t outer = f.table_size() / (inner * card);

  typename BasicFactor<Scalar>::Values out(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    out.segment(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) =
        f.values().segment(static_cast<Eigen::Index>((o * card + state) * inner),
                           static_cast<Eigen::Index>(inner));
  }
  return BasicFactor<Scalar>(std::move(scope), std::move(cards), std::move(out));
}

}  // namespace roadrisk::bbn
