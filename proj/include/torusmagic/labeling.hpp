#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "torusmagic/grid.hpp"

namespace torusmagic {

/// An assignment of integers to the q edges of a torus grid, stored in
/// edge_index order. A zero entry means "no label"; a total labeling has
/// no zeros. Values are not required to form a bijection; that is what the
/// verifier decides.
class labeling {
 public:
  labeling() = default;
  explicit labeling(const grid_dims& g)
      : dims_(g), labels_(static_cast<std::size_t>(g.q), label_t{0}) {}
  labeling(const grid_dims& g, std::vector<label_t> labels) : dims_(g), labels_(std::move(labels)) {
    if (labels_.size() != static_cast<std::size_t>(g.q)) {
      throw shape_error("labeling needs " + std::to_string(g.q) + " entries, got " +
                        std::to_string(labels_.size()));
    }
  }

  const grid_dims& dims() const noexcept { return dims_; }

  label_t operator[](const edge_ref& e) const { return labels_[edge_index(dims_, e)]; }
  label_t& operator[](const edge_ref& e) { return labels_[edge_index(dims_, e)]; }

  label_t at(const edge_ref& e) const {
    if (!in_range(dims_, e)) throw domain_mismatch(to_string(e) + " is not an edge of the grid");
    return (*this)[e];
  }

  std::span<const label_t> values() const noexcept { return labels_; }
  std::span<label_t> values() noexcept { return labels_; }

  bool is_total() const noexcept {
    for (auto x : labels_) {
      if (x == 0) return false;
    }
    return true;
  }

  /// The same labeling viewed on C_m x C_n (rows and columns exchanged).
  /// H(i,j) becomes V(j,i) and V(i,j) becomes H(j,i).
  labeling transposed() const {
    labeling out(torusmagic::dims(dims_.m, dims_.n));
    for (int i = 1; i <= dims_.n; ++i) {
      for (int j = 1; j <= dims_.m; ++j) {
        out[V(j, i)] = (*this)[H(i, j)];
        out[H(j, i)] = (*this)[V(i, j)];
      }
    }
    return out;
  }

  friend bool operator==(const labeling&, const labeling&) = default;

 private:
  grid_dims dims_{};
  std::vector<label_t> labels_;
};

}  // namespace torusmagic
