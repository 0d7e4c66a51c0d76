#include "npcd/residual_table.hpp"

#include <string>

#include "npcd/errors.hpp"
#include "npcd/parallel.hpp"
#include "npcd/stats.hpp"

namespace npcd {

std::vector<int> mask_vertices(VertexMask m) {
  std::vector<int> out;
  for (int v = 0; m != 0; ++v, m >>= 1)
    if (m & 1U) out.push_back(v);
  return out;
}

VertexMask vertices_mask(const std::vector<int>& vertices) {
  VertexMask m = 0;
  for (int v : vertices) m |= VertexMask{1} << v;
  return m;
}

ResidualTable::ResidualTable(int d, int cap)
    : d_(d), cap_(cap),
      table_(static_cast<std::size_t>(d) << d, std::numeric_limits<double>::quiet_NaN()) {}

namespace {

struct Job {
  int vertex;
  VertexMask parents;
};

std::vector<Job> jobs_for(int d, int cap) {
  if (d > kMaxMaskVertices) {
    throw CapacityError("residual table supports at most " + std::to_string(kMaxMaskVertices) +
                        " vertices");
  }
  std::vector<Job> jobs;
  const VertexMask all = (VertexMask{1} << d) - 1;
  for (int v = 0; v < d; ++v) {
    const VertexMask others = all & ~(VertexMask{1} << v);
    // Enumerate submasks of `others`, including the empty set.
    VertexMask s = others;
    while (true) {
      if (mask_size(s) <= cap) jobs.push_back({v, s});
      if (s == 0) break;
      s = (s - 1) & others;
    }
  }
  return jobs;
}

double fit(const Dataset& data, const Job& job) {
  const auto vs = mask_vertices(job.parents);
  return least_squares(select_columns(data, vs), data.values().col(job.vertex)).rss;
}

}  // namespace

ResidualTable ResidualTable::build(const Dataset& data, int max_subset) {
  ResidualTable t(data.dim(), max_subset);
  const auto jobs = jobs_for(data.dim(), max_subset);
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const Job& job = jobs[static_cast<std::size_t>(k)];
    t.table_[static_cast<std::size_t>(job.vertex) << t.d_ | job.parents] = fit(data, job);
  }
  return t;
}

ResidualTable ResidualTable::build_serial(const Dataset& data, int max_subset) {
  ResidualTable t(data.dim(), max_subset);
  for (const Job& job : jobs_for(data.dim(), max_subset))
    t.table_[static_cast<std::size_t>(job.vertex) << t.d_ | job.parents] = fit(data, job);
  return t;
}

}  // namespace npcd
