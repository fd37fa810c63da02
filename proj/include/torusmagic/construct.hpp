#pragma once

// Explicit supermagic labelings of C_n x C_m built diagonal by diagonal.
//
// Every diagonal D^j receives two blocks of l consecutive labels, one on its
// horizontal edges and one on its vertical edges, arranged so that the
// partial weight at each HV corner of D^j and the VH corner of D^{j+1} at the
// same vertex add up to 4nm + 2. The odd/odd variant needs one extra
// diagonal labeled differently to absorb the odd number of diagonals.
//
// The formulas are written for n <= m; larger first factors are handled by
// building C_m x C_n and transposing.

#include <string>
#include <variant>
#include <vector>

#include "torusmagic/grid.hpp"
#include "torusmagic/labeling.hpp"

namespace torusmagic {

enum class plan_variant { odd_odd, even_even };

inline std::string to_string(plan_variant v) {
  return v == plan_variant::odd_odd ? "odd-odd" : "even-even";
}

struct construction_plan {
  plan_variant variant = plan_variant::odd_odd;
  // Start columns of D^1..D^d on the (min, max)-oriented grid.
  std::vector<int> start_cols;
  // True when the input grid had n > m and the labeling was built on the
  // transposed grid.
  bool transposed = false;

  friend bool operator==(const construction_plan&, const construction_plan&) = default;
};

namespace detail {

inline grid_dims oriented(const grid_dims& g) { return g.n <= g.m ? g : dims(g.m, g.n); }

inline bool shape_matches(plan_variant v, const grid_dims& g) {
  if (v == plan_variant::odd_odd) return g.n % 2 == 1 && g.m % 2 == 1 && g.d > 1;
  return g.n % 2 == 0 && g.m % 2 == 0;
}

}  // namespace detail

/// The plan a construction uses for the given grid: D^1 starts at column
/// d + 1 (wrapped), every other D^j at column j.
inline construction_plan make_plan(plan_variant v, const grid_dims& g) {
  if (!detail::shape_matches(v, g)) {
    throw plan_shape_mismatch(to_string(v) + " plan does not fit C_" + std::to_string(g.n) +
                              " x C_" + std::to_string(g.m));
  }
  const auto core = detail::oriented(g);
  construction_plan plan{v, {}, g.n > g.m};
  plan.start_cols.reserve(static_cast<std::size_t>(core.d));
  plan.start_cols.push_back(wrap(core.d + 1, core.m));
  for (int j = 2; j <= core.d; ++j) plan.start_cols.push_back(j);
  return plan;
}

namespace detail {

// Writes each edge label once; any overwrite or out-of-range value is a
// transcription error in the formulas.
class label_writer {
 public:
  explicit label_writer(const grid_dims& g) : lab_(g) {}

  void put(const edge_ref& e, label_t value) {
    auto& slot = lab_[e];
    if (slot != 0) throw std::logic_error("edge " + to_string(e) + " labeled twice");
    if (value < 1 || value > lab_.dims().q) {
      throw std::logic_error("label " + std::to_string(value) + " out of range for " + to_string(e));
    }
    slot = value;
  }

  labeling finish() && {
    if (!lab_.is_total()) throw std::logic_error("construction left an edge unlabeled");
    return std::move(lab_);
  }

 private:
  labeling lab_;
};

// Generic odd-position block: h increasing from (j-1)l + 1, v decreasing
// from 2nm - (j-1)l.
inline void label_plain(label_writer& w, const diagonal& dg, const grid_dims& g) {
  const auto j = dg.index();
  for (std::int64_t k = 1; k <= g.l; ++k) {
    w.put(dg.h(k), (j - 1) * g.l + k);
    w.put(dg.v(k), g.q - (j - 1) * g.l - k + 1);
  }
}

// Same blocks with the horizontal labels rotated by one position, which puts
// the largest horizontal label on h_1.
inline void label_shifted(label_writer& w, const diagonal& dg, const grid_dims& g) {
  const auto j = dg.index();
  for (std::int64_t k = 1; k <= g.l; ++k) {
    w.put(dg.h(k), k == 1 ? j * g.l : (j - 1) * g.l + k - 1);
    w.put(dg.v(k), g.q - (j - 1) * g.l - k + 1);
  }
}

// D^{d-1} of the odd/odd construction: exceptional HV corner moved to k = l'+2.
inline void label_penultimate(label_writer& w, const diagonal& dg, const grid_dims& g) {
  const auto l = g.l, lp = *g.lp, base = (g.d - 2) * l;
  for (std::int64_t k = 1; k <= l; ++k) {
    w.put(dg.h(k), k <= lp + 2 ? base + k + lp - 1 : base + k - lp - 2);
    w.put(dg.v(k), k <= lp + 1 ? g.q - base - k - lp + 1 : g.q - base - k + lp + 2);
  }
}

// D^d of the odd/odd construction: mixes the upper halves of two blocks.
inline void label_last(label_writer& w, const diagonal& dg, const grid_dims& g) {
  const auto l = g.l, lp = *g.lp, d = std::int64_t{g.d};
  for (std::int64_t k = 1; k <= l; ++k) {
    label_t hk = 0;
    if (k == 1) {
      hk = d * l;
    } else if (k <= lp + 1) {
      hk = (d - 1) * l + 2 * k - 2;
    } else {
      hk = (d - 2) * l + 2 * k - 2;
    }
    w.put(dg.h(k), hk);
    w.put(dg.v(k), k <= lp + 1 ? g.q - (d - 1) * l - 2 * k + 2 : g.q - (d - 2) * l - 2 * k + 2);
  }
}

inline labeling build(plan_variant v, const grid_dims& input) {
  const auto plan = make_plan(v, input);
  const auto g = oriented(input);
  label_writer w(g);
  for (const auto& dg : decompose(g, plan.start_cols)) {
    const int j = dg.index();
    if (v == plan_variant::even_even) {
      j % 2 == 1 ? label_plain(w, dg, g) : label_shifted(w, dg, g);
    } else if (j == g.d) {
      label_last(w, dg, g);
    } else if (j == g.d - 1) {
      label_penultimate(w, dg, g);
    } else {
      j % 2 == 1 ? label_plain(w, dg, g) : label_shifted(w, dg, g);
    }
  }
  auto lab = std::move(w).finish();
  return plan.transposed ? lab.transposed() : lab;
}

}  // namespace detail

/// Labeling for n, m odd with gcd(n, m) > 1. Throws unsupported_shape otherwise.
inline labeling construct_odd_odd(const grid_dims& g) {
  if (!detail::shape_matches(plan_variant::odd_odd, g)) {
    throw unsupported_shape("odd/odd construction needs n, m odd with gcd > 1");
  }
  return detail::build(plan_variant::odd_odd, g);
}

/// Labeling for n, m even. Throws unsupported_shape otherwise.
inline labeling construct_even_even(const grid_dims& g) {
  if (!detail::shape_matches(plan_variant::even_even, g)) {
    throw unsupported_shape("even/even construction needs n, m even");
  }
  return detail::build(plan_variant::even_even, g);
}

struct constructed {
  labeling lab;
  construction_plan plan;
};

enum class unsupported_reason { mixed_parity, coprime_odd };

struct unsupported {
  unsupported_reason reason;
  std::string message;
};

using construct_result = std::variant<constructed, unsupported>;

/// Dispatches on parity. Shapes with no explicit construction come back as
/// `unsupported` with a hint to run the search instead.
inline construct_result construct(int n, int m) {
  const auto g = dims(n, m);
  const auto hint = " has no explicit construction; try `search " + std::to_string(n) + " " +
                    std::to_string(m) + "`";
  const auto name = "C_" + std::to_string(n) + " x C_" + std::to_string(m);
  if (n % 2 != m % 2) {
    return unsupported{unsupported_reason::mixed_parity, name + " (mixed parity)" + hint};
  }
  if (n % 2 == 0) {
    return constructed{construct_even_even(g), make_plan(plan_variant::even_even, g)};
  }
  if (g.d == 1) {
    return unsupported{unsupported_reason::coprime_odd, name + " (coprime odd)" + hint};
  }
  return constructed{construct_odd_odd(g), make_plan(plan_variant::odd_odd, g)};
}

/// Expected partial weight at every corner of a constructed labeling.
/// Indexed on the (min, max)-oriented grid.
class expected_corner_table {
 public:
  expected_corner_table(const construction_plan& plan, const grid_dims& input)
      : plan_(plan), dims_(detail::oriented(input)) {
    if (!detail::shape_matches(plan.variant, input) || plan.transposed != (input.n > input.m) ||
        plan.start_cols.size() != static_cast<std::size_t>(dims_.d)) {
      throw plan_shape_mismatch("plan is inconsistent with C_" + std::to_string(input.n) + " x C_" +
                                std::to_string(input.m));
    }
    const auto g = dims_;
    const auto size = static_cast<std::size_t>(g.d * g.l);
    hv_.resize(size);
    vh_.resize(size);
    const label_t base = g.q;
    for (int j = 1; j <= g.d; ++j) {
      for (std::int64_t k = 1; k <= g.l; ++k) {
        label_t hv = 0, vh = 0;
        const bool odd_role = j % 2 == 1 && !(plan.variant == plan_variant::odd_odd && j == g.d);
        if (odd_role) {
          hv = base + 1;
          vh = k == 1 ? base - g.l + 2 : base + 2;
        } else if (plan.variant == plan_variant::odd_odd && j == g.d) {
          hv = k == 1 ? base + g.l : base;
          vh = k == *g.lp + 2 ? base - g.l + 2 : base + 2;
        } else if (plan.variant == plan_variant::odd_odd && j == g.d - 1) {
          hv = k == *g.lp + 2 ? base + g.l : base;
          vh = base + 1;
        } else {
          hv = k == 1 ? base + g.l : base;
          vh = base + 1;
        }
        hv_[slot(j, k)] = hv;
        vh_[slot(j, k)] = vh;
      }
    }
  }

  const construction_plan& plan() const noexcept { return plan_; }
  /// The grid the table is indexed on (n <= m).
  const grid_dims& dims() const noexcept { return dims_; }

  label_t at(const corner_pos& c) const {
    if (c.diag < 1 || c.diag > dims_.d || c.k < 1 || c.k > dims_.l) {
      throw std::out_of_range("corner " + to_string(c) + " out of range");
    }
    return c.kind == corner_kind::hv ? hv_[slot(c.diag, c.k)] : vh_[slot(c.diag, c.k)];
  }

 private:
  std::size_t slot(int j, std::int64_t k) const noexcept {
    return static_cast<std::size_t>((j - 1) * dims_.l + (k - 1));
  }

  construction_plan plan_;
  grid_dims dims_;
  std::vector<label_t> hv_;
  std::vector<label_t> vh_;
};

}  // namespace torusmagic
