#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "pptdist/error.hpp"

namespace pptdist {

enum class Side { A, B };

struct Factor {
  int dim = 1;
  Side side = Side::A;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Ordered tensor factors, each owned by Alice (A) or Bob (B). Composite
/// indices are row-major over the factors: the first factor is the most
/// significant digit, matching kron(first, second).
class BipartiteSpace {
 public:
  BipartiteSpace() = default;
  BipartiteSpace(std::initializer_list<Factor> factors) : factors_(factors) { validate(); }
  explicit BipartiteSpace(std::vector<Factor> factors) : factors_(std::move(factors)) { validate(); }

  /// The common d⊗d layout: one Alice factor followed by one Bob factor.
  static BipartiteSpace pair(int dim_a, int dim_b) {
    return BipartiteSpace{{dim_a, Side::A}, {dim_b, Side::B}};
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t size() const noexcept { return factors_.size(); }
  const Factor& operator[](std::size_t i) const { return factors_.at(i); }

  std::size_t total_dim() const noexcept {
    return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1},
                           [](std::size_t acc, const Factor& f) { return acc * static_cast<std::size_t>(f.dim); });
  }

  std::size_t side_dim(Side side) const noexcept {
    std::size_t d = 1;
    for (const auto& f : factors_)
      if (f.side == side) d *= static_cast<std::size_t>(f.dim);
    return d;
  }

  bool has_side(Side side) const noexcept {
    for (const auto& f : factors_)
      if (f.side == side) return true;
    return false;
  }

  bool is_bipartite() const noexcept { return has_side(Side::A) && has_side(Side::B); }

  void require_bipartite(const char* what) const {
    if (!is_bipartite()) raise(ErrorCode::OneSidedSpace, std::string(what) + " needs factors on both sides");
  }

  std::vector<int> dims() const {
    std::vector<int> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_) out.push_back(f.dim);
    return out;
  }

  /// Concatenation: factors of *this followed by factors of other (Kronecker order).
  BipartiteSpace merged(const BipartiteSpace& other) const {
    std::vector<Factor> all = factors_;
    all.insert(all.end(), other.factors_.begin(), other.factors_.end());
    return BipartiteSpace(std::move(all));
  }

  /// m-fold repetition of the factor list.
  BipartiteSpace power(int m) const {
    std::vector<Factor> all;
    for (int i = 0; i < m; ++i) all.insert(all.end(), factors_.begin(), factors_.end());
    return BipartiteSpace(std::move(all));
  }

  friend bool operator==(const BipartiteSpace&, const BipartiteSpace&) = default;

 private:
  void validate() const {
    for (const auto& f : factors_)
      if (f.dim < 1) raise(ErrorCode::BadDimension, "factor dimension must be positive");
  }

  std::vector<Factor> factors_;
};

namespace detail {

/// Row-major digit decomposition helper for composite indices.
class MixedRadix {
 public:
  explicit MixedRadix(std::vector<int> dims) : dims_(std::move(dims)), strides_(dims_.size(), 1) {
    for (std::size_t i = dims_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * static_cast<std::size_t>(dims_[i]);
  }

  void split(std::size_t index, std::vector<int>& digits) const {
    digits.resize(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      digits[i] = static_cast<int>(index / strides_[i]);
      index %= strides_[i];
    }
  }

  std::size_t join(const std::vector<int>& digits) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) index += static_cast<std::size_t>(digits[i]) * strides_[i];
    return index;
  }

  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
};

}  // namespace detail
}  // namespace pptdist
