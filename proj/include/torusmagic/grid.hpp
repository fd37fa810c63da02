#pragma once

// Torus grid C_n x C_m: dimensions, canonical edge names, incidence and the
// decomposition of the edge set into alternating "diagonal" cycles.
//
// All public coordinates are 1-based. Row indices live in 1..n, column
// indices in 1..m, and wrap-around is ((x - 1) mod n) + 1.

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "torusmagic/error.hpp"

namespace torusmagic {

using label_t = std::int64_t;

/// Wraps an arbitrary integer into the 1-based range 1..period.
constexpr int wrap(std::int64_t x, int period) noexcept {
  auto r = (x - 1) % period;
  if (r < 0) r += period;
  return static_cast<int>(r) + 1;
}

struct grid_dims {
  int n = 0;                  // rows (length of the first cycle)
  int m = 0;                  // columns
  std::int64_t l = 0;         // lcm(n, m)
  int d = 0;                  // gcd(n, m), the number of diagonals
  std::int64_t q = 0;         // edge count 2nm
  std::optional<std::int64_t> lp;  // (l - 1) / 2, only when l is odd

  std::int64_t vertex_count() const noexcept { return std::int64_t{n} * m; }
  std::int64_t edge_count() const noexcept { return q; }

  /// The only possible magic constant: every label is counted at two
  /// vertices, so nm * c = 2 * q(q + 1) / 2.
  std::int64_t magic_constant() const noexcept { return 4 * vertex_count() + 2; }

  friend bool operator==(const grid_dims&, const grid_dims&) = default;
};

/// Builds the dimension record for C_n x C_m. Throws dimension_too_small.
inline grid_dims dims(int n, int m) {
  if (n < 3 || m < 3) {
    throw dimension_too_small("cycle lengths must be at least 3 (got " + std::to_string(n) +
                              ", " + std::to_string(m) + ")");
  }
  grid_dims g;
  g.n = n;
  g.m = m;
  g.d = std::gcd(n, m);
  g.l = std::lcm(std::int64_t{n}, std::int64_t{m});
  g.q = 2 * std::int64_t{n} * m;
  if (g.l % 2 == 1) g.lp = (g.l - 1) / 2;
  return g;
}

enum class orientation : std::uint8_t { horizontal = 0, vertical = 1 };

/// H(i,j) is the edge x_{i,j} -- x_{i,j+1}; V(i,j) is x_{i,j} -- x_{i+1,j}.
struct edge_ref {
  orientation orient = orientation::horizontal;
  int i = 1;
  int j = 1;

  friend auto operator<=>(const edge_ref&, const edge_ref&) = default;
};

inline edge_ref H(int i, int j) { return {orientation::horizontal, i, j}; }
inline edge_ref V(int i, int j) { return {orientation::vertical, i, j}; }

struct vertex_ref {
  int i = 1;
  int j = 1;

  friend auto operator<=>(const vertex_ref&, const vertex_ref&) = default;
};

inline std::string to_string(const edge_ref& e) {
  return std::string(e.orient == orientation::horizontal ? "H(" : "V(") + std::to_string(e.i) +
         "," + std::to_string(e.j) + ")";
}

inline std::string to_string(const vertex_ref& v) {
  return "(" + std::to_string(v.i) + "," + std::to_string(v.j) + ")";
}

inline std::ostream& operator<<(std::ostream& os, const edge_ref& e) { return os << to_string(e); }
inline std::ostream& operator<<(std::ostream& os, const vertex_ref& v) { return os << to_string(v); }

inline bool in_range(const grid_dims& g, const vertex_ref& v) noexcept {
  return v.i >= 1 && v.i <= g.n && v.j >= 1 && v.j <= g.m;
}

inline bool in_range(const grid_dims& g, const edge_ref& e) noexcept {
  return e.i >= 1 && e.i <= g.n && e.j >= 1 && e.j <= g.m;
}

// Dense indices: vertices row-major, then all H edges followed by all V edges.

inline std::size_t vertex_index(const grid_dims& g, const vertex_ref& v) noexcept {
  return static_cast<std::size_t>(v.i - 1) * g.m + static_cast<std::size_t>(v.j - 1);
}

inline vertex_ref vertex_at(const grid_dims& g, std::size_t idx) noexcept {
  return {static_cast<int>(idx / g.m) + 1, static_cast<int>(idx % g.m) + 1};
}

inline std::size_t edge_index(const grid_dims& g, const edge_ref& e) noexcept {
  const auto base = e.orient == orientation::horizontal ? std::size_t{0}
                                                        : static_cast<std::size_t>(g.n) * g.m;
  return base + static_cast<std::size_t>(e.i - 1) * g.m + static_cast<std::size_t>(e.j - 1);
}

inline edge_ref edge_at(const grid_dims& g, std::size_t idx) noexcept {
  const auto nm = static_cast<std::size_t>(g.n) * g.m;
  const auto orient = idx < nm ? orientation::horizontal : orientation::vertical;
  const auto r = idx % nm;
  return {orient, static_cast<int>(r / g.m) + 1, static_cast<int>(r % g.m) + 1};
}

/// The two end vertices; the first is x_{i,j}.
inline std::pair<vertex_ref, vertex_ref> endpoints(const edge_ref& e, const grid_dims& g) noexcept {
  if (e.orient == orientation::horizontal) return {{e.i, e.j}, {e.i, wrap(e.j + 1, g.m)}};
  return {{e.i, e.j}, {wrap(e.i + 1, g.n), e.j}};
}

/// H(i,j), H(i,j-1), V(i,j), V(i-1,j), in that order.
inline std::array<edge_ref, 4> incident_edges(const vertex_ref& v, const grid_dims& g) noexcept {
  return {H(v.i, v.j), H(v.i, wrap(v.j - 1, g.m)), V(v.i, v.j), V(wrap(v.i - 1, g.n), v.j)};
}

enum class corner_kind : std::uint8_t { hv, vh };

struct corner_pos {
  int diag = 1;       // 1..d
  std::int64_t k = 1;  // 1..l
  corner_kind kind = corner_kind::hv;

  friend auto operator<=>(const corner_pos&, const corner_pos&) = default;
};

inline std::string to_string(const corner_pos& c) {
  return std::string(c.kind == corner_kind::hv ? "HV" : "VH") + "[D" + std::to_string(c.diag) +
         ",k=" + std::to_string(c.k) + "]";
}

/// One alternating cycle h_1, v_1, h_2, v_2, ..., h_l, v_l starting at
/// vertex x_{1,start_col}. h_k = H(k, start + k - 1), v_k = V(k, start + k).
class diagonal {
 public:
  diagonal(int index, int start_col, std::vector<edge_ref> edges)
      : index_(index), start_col_(start_col), edges_(std::move(edges)) {}

  int index() const noexcept { return index_; }
  int start_col() const noexcept { return start_col_; }
  std::int64_t length() const noexcept { return static_cast<std::int64_t>(edges_.size()) / 2; }

  /// All 2l edges in cycle order.
  const std::vector<edge_ref>& edges() const noexcept { return edges_; }

  /// k-th horizontal / vertical edge, k in 1..l.
  const edge_ref& h(std::int64_t k) const { return edges_.at(static_cast<std::size_t>(2 * (k - 1))); }
  const edge_ref& v(std::int64_t k) const {
    return edges_.at(static_cast<std::size_t>(2 * (k - 1) + 1));
  }

 private:
  int index_;
  int start_col_;
  std::vector<edge_ref> edges_;
};

/// Traces diagonal D^j starting at x_{1,s}. Requires s = j (mod d).
inline diagonal make_diagonal(int j, int start_col, const grid_dims& g) {
  if (j < 1 || j > g.d) {
    throw invalid_start_column("diagonal index " + std::to_string(j) + " outside 1.." +
                               std::to_string(g.d));
  }
  if (start_col < 1 || start_col > g.m || (start_col - j) % g.d != 0) {
    throw invalid_start_column("start column " + std::to_string(start_col) +
                               " is not congruent to " + std::to_string(j) + " mod " +
                               std::to_string(g.d));
  }
  std::vector<edge_ref> edges;
  edges.reserve(static_cast<std::size_t>(2 * g.l));
  for (std::int64_t k = 1; k <= g.l; ++k) {
    const int row = wrap(k, g.n);
    edges.push_back(H(row, wrap(start_col + k - 1, g.m)));
    edges.push_back(V(row, wrap(start_col + k, g.m)));
  }
  return diagonal(j, start_col, std::move(edges));
}

/// All d diagonals. Default start columns are 1..d.
inline std::vector<diagonal> decompose(const grid_dims& g,
                                       const std::optional<std::vector<int>>& starts = std::nullopt) {
  if (starts && starts->size() != static_cast<std::size_t>(g.d)) {
    throw invalid_start_column("expected " + std::to_string(g.d) + " start columns, got " +
                               std::to_string(starts->size()));
  }
  std::vector<diagonal> out;
  out.reserve(static_cast<std::size_t>(g.d));
  for (int j = 1; j <= g.d; ++j) {
    out.push_back(make_diagonal(j, starts ? (*starts)[static_cast<std::size_t>(j - 1)] : j, g));
  }
  return out;
}

namespace detail {

// Smallest k in 1..lcm(a_mod, b_mod) with k = a (mod a_mod) and k = b (mod b_mod).
// The caller guarantees a = b (mod gcd).
inline std::int64_t crt(std::int64_t a, std::int64_t a_mod, std::int64_t b, std::int64_t b_mod) {
  // Extended Euclid on (a_mod, b_mod).
  std::int64_t old_r = a_mod, r = b_mod, old_s = 1, s = 0;
  while (r != 0) {
    const auto qt = old_r / r;
    old_r = std::exchange(r, old_r - qt * r);
    old_s = std::exchange(s, old_s - qt * s);
  }
  const auto g = old_r;
  const auto lcm = a_mod / g * b_mod;
  const auto step = b_mod / g;
  // k = a + a_mod * t, with a_mod * t = b - a (mod b_mod).
  auto t = ((b - a) / g) % step * (old_s % step) % step;
  if (t < 0) t += step;
  auto k = (a + a_mod * t) % lcm;
  if (k <= 0) k += lcm;
  return k;
}

}  // namespace detail

struct diagonal_position {
  int diag = 1;
  std::int64_t k = 1;
  orientation kind = orientation::horizontal;  // h_k or v_k

  friend bool operator==(const diagonal_position&, const diagonal_position&) = default;
};

/// Locates an edge inside the canonical diagonal (start column = index).
inline diagonal_position diagonal_of_edge(const edge_ref& e, const grid_dims& g) {
  if (e.orient == orientation::horizontal) {
    const int j = wrap(e.j - e.i + 1, g.d);
    return {j, detail::crt(e.i, g.n, e.j - j + 1, g.m), orientation::horizontal};
  }
  const int j = wrap(e.j - e.i, g.d);
  return {j, detail::crt(e.i, g.n, e.j - j, g.m), orientation::vertical};
}

/// The vertex where a corner sits, for a diagonal that starts at column s.
/// HV corner k = (h_k, v_k); VH corner k = (v_{k-1}, h_k) with v_0 = v_l.
inline vertex_ref corner_vertex(const corner_pos& c, int start_col, const grid_dims& g) noexcept {
  const int row = wrap(c.k, g.n);
  if (c.kind == corner_kind::hv) return {row, wrap(start_col + c.k, g.m)};
  return {row, wrap(start_col + c.k - 1, g.m)};
}

}  // namespace torusmagic
