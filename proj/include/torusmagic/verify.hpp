#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "torusmagic/construct.hpp"
#include "torusmagic/grid.hpp"
#include "torusmagic/labeling.hpp"

namespace torusmagic {

/// 4nm + 2, the only constant a supermagic labeling of C_n x C_m can have.
inline std::int64_t forced_constant(const grid_dims& g) noexcept { return g.magic_constant(); }

/// Sum of the four labels incident to v.
inline std::int64_t vertex_weight(const labeling& lab, const vertex_ref& v) {
  std::int64_t w = 0;
  for (const auto& e : incident_edges(v, lab.dims())) w += lab[e];
  return w;
}

/// Partial weight at x_{i,j} of the HV corner (H(i,j-1), V(i,j)) and of the
/// VH corner (V(i-1,j), H(i,j)). Their sum is the vertex weight.
inline std::int64_t hv_partial_weight(const labeling& lab, const vertex_ref& v) {
  const auto& g = lab.dims();
  return lab[H(v.i, wrap(v.j - 1, g.m))] + lab[V(v.i, v.j)];
}

inline std::int64_t vh_partial_weight(const labeling& lab, const vertex_ref& v) {
  const auto& g = lab.dims();
  return lab[V(wrap(v.i - 1, g.n), v.j)] + lab[H(v.i, v.j)];
}

struct verification_report {
  bool is_bijection = false;
  // Labels that break the bijection onto 1..q: duplicates (listed once),
  // values outside 1..q, and values in 1..q that never occur. Sorted.
  std::vector<label_t> duplicate_or_missing;
  // Indexed by vertex_index.
  std::vector<std::int64_t> weights;
  // Common weight when all vertex weights agree.
  std::optional<std::int64_t> constant;
  bool is_supermagic = false;
  // Vertices whose weight differs from 4nm + 2.
  std::vector<vertex_ref> off_weight;
};

/// Checks bijectivity onto 1..q and uniformity of vertex weights. Throws
/// domain_mismatch if any edge is unlabeled.
inline verification_report verify(const labeling& lab) {
  const auto& g = lab.dims();
  const auto values = lab.values();
  if (values.size() != static_cast<std::size_t>(g.q)) {
    throw domain_mismatch("labeling has " + std::to_string(values.size()) + " entries for " +
                          std::to_string(g.q) + " edges");
  }
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    if (values[idx] == 0) throw domain_mismatch("edge " + to_string(edge_at(g, idx)) + " has no label");
  }

  verification_report rep;
  std::vector<int> seen(static_cast<std::size_t>(g.q) + 1, 0);
  for (auto x : values) {
    if (x >= 1 && x <= g.q) {
      if (++seen[static_cast<std::size_t>(x)] == 2) rep.duplicate_or_missing.push_back(x);
    } else {
      rep.duplicate_or_missing.push_back(x);
    }
  }
  for (label_t x = 1; x <= g.q; ++x) {
    if (seen[static_cast<std::size_t>(x)] == 0) rep.duplicate_or_missing.push_back(x);
  }
  std::sort(rep.duplicate_or_missing.begin(), rep.duplicate_or_missing.end());
  rep.is_bijection = rep.duplicate_or_missing.empty();

  const auto target = forced_constant(g);
  rep.weights.resize(static_cast<std::size_t>(g.vertex_count()));
  for (std::size_t vi = 0; vi < rep.weights.size(); ++vi) {
    const auto v = vertex_at(g, vi);
    rep.weights[vi] = vertex_weight(lab, v);
    if (rep.weights[vi] != target) rep.off_weight.push_back(v);
  }
  if (std::all_of(rep.weights.begin(), rep.weights.end(),
                  [&](auto w) { return w == rep.weights.front(); })) {
    rep.constant = rep.weights.front();
  }
  rep.is_supermagic = rep.is_bijection && rep.constant.has_value();
  return rep;
}

struct corner_mismatch {
  corner_pos corner;
  vertex_ref at;
  std::int64_t expected = 0;
  std::int64_t actual = 0;
};

struct corner_audit_report {
  std::vector<corner_mismatch> mismatches;
  bool clean = true;
};

/// Compares every corner's partial weight with the value the construction
/// plan predicts. Corners are positional, so the labeling must use the
/// plan's start columns.
inline corner_audit_report audit_corners(const labeling& lab, const construction_plan& plan) {
  const expected_corner_table table(plan, lab.dims());
  const auto oriented = plan.transposed ? lab.transposed() : lab;
  const auto& g = table.dims();

  corner_audit_report rep;
  for (const auto& dg : decompose(g, plan.start_cols)) {
    for (std::int64_t k = 1; k <= g.l; ++k) {
      const auto prev_v = dg.v(k == 1 ? g.l : k - 1);
      const std::int64_t hv = oriented[dg.h(k)] + oriented[dg.v(k)];
      const std::int64_t vh = oriented[prev_v] + oriented[dg.h(k)];
      for (auto [kind, actual] : {std::pair{corner_kind::hv, hv}, std::pair{corner_kind::vh, vh}}) {
        const corner_pos c{dg.index(), k, kind};
        const auto expected = table.at(c);
        if (expected != actual) {
          auto where = corner_vertex(c, dg.start_col(), g);
          if (plan.transposed) where = {where.j, where.i};
          rep.mismatches.push_back({c, where, expected, actual});
        }
      }
    }
  }
  rep.clean = rep.mismatches.empty();
  return rep;
}

}  // namespace torusmagic
