#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "npcd/sem.hpp"

namespace npcd {

using VertexMask = std::uint32_t;

inline int mask_size(VertexMask m) { return __builtin_popcount(m); }
std::vector<int> mask_vertices(VertexMask m);
VertexMask vertices_mask(const std::vector<int>& vertices);

constexpr int kMaxMaskVertices = 20;

/// Residual sum of squares of every vertex regressed on every subset of the
/// other vertices with at most `max_subset` members. Entries above the cap are
/// NaN.
///
/// Both the epsilon-CUT pair search and the GLRT ordering search read the same
/// regressions many times, so they are computed once per dataset here.
class ResidualTable {
 public:
  static ResidualTable build(const Dataset& data, int max_subset);         // OpenMP
  static ResidualTable build_serial(const Dataset& data, int max_subset);  // reference

  int dim() const { return d_; }
  int max_subset() const { return cap_; }
  double rss(int vertex, VertexMask parents) const {
    return table_[static_cast<std::size_t>(vertex) << d_ | parents];
  }

 private:
  ResidualTable(int d, int cap);

  int d_ = 0;
  int cap_ = 0;
  std::vector<double> table_;
};

}  // namespace npcd
