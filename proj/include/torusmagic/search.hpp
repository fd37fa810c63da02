#pragma once

// Exact backtracking search for supermagic labelings of C_n x C_m.
//
// Variables are edges, values are labels 1..q and every vertex carries the
// constraint "incident labels sum to 4nm + 2". After each assignment the
// engine propagates to a fixpoint:
//   * a vertex with one unlabeled edge forces that edge's label,
//   * a vertex with two unlabeled edges needs an unused pair with the right sum,
//   * a vertex with three or four unlabeled edges needs the remaining sum to
//     lie between the r smallest and r largest unused labels.
// Branching picks the vertex with the fewest unlabeled edges and tries every
// unused label on its first unlabeled edge.
//
// Symmetry: label 1 is pinned to H(1,1) (rotations act transitively on the
// horizontal edges). When n != m the vertical edges form a separate orbit,
// so a second root with label 1 on V(1,1) is explored as well.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "torusmagic/grid.hpp"
#include "torusmagic/labeling.hpp"
#include "torusmagic/verify.hpp"

namespace torusmagic {

/// Set of labels in 1..q that are still available.
class label_pool {
 public:
  label_pool() = default;
  explicit label_pool(std::int64_t q, bool full = true)
      : q_(q), words_(static_cast<std::size_t>(q / 64 + 1), 0) {
    if (full) {
      for (label_t x = 1; x <= q; ++x) give(x);
    }
  }

  std::int64_t capacity() const noexcept { return q_; }
  std::int64_t size() const noexcept { return count_; }

  bool contains(label_t x) const noexcept {
    return x >= 1 && x <= q_ && (words_[word(x)] >> bit(x) & 1u) != 0;
  }

  void take(label_t x) noexcept {
    words_[word(x)] &= ~(std::uint64_t{1} << bit(x));
    --count_;
  }

  void give(label_t x) noexcept {
    words_[word(x)] |= std::uint64_t{1} << bit(x);
    ++count_;
  }

  /// Calls f(x) for each available label in ascending order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
        f(static_cast<label_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      }
    }
  }

  /// Sum of the r smallest available labels, or nullopt if fewer than r remain.
  std::optional<std::int64_t> smallest_sum(int r) const noexcept {
    std::int64_t s = 0;
    for (std::size_t w = 0; w < words_.size() && r > 0; ++w) {
      for (auto bits = words_[w]; bits != 0 && r > 0; bits &= bits - 1, --r) {
        s += static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
    if (r > 0) return std::nullopt;
    return s;
  }

  std::optional<std::int64_t> largest_sum(int r) const noexcept {
    std::int64_t s = 0;
    for (std::size_t w = words_.size(); w-- > 0 && r > 0;) {
      for (auto bits = words_[w]; bits != 0 && r > 0; --r) {
        const int top = 63 - std::countl_zero(bits);
        s += static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(top));
        bits &= ~(std::uint64_t{1} << top);
      }
    }
    if (r > 0) return std::nullopt;
    return s;
  }

  /// True if two distinct available labels add up to sum.
  bool has_pair(std::int64_t sum) const noexcept {
    for (label_t a = std::max<label_t>(1, sum - q_); 2 * a < sum; ++a) {
      if (contains(a) && contains(sum - a)) return true;
    }
    return false;
  }

 private:
  static std::size_t word(label_t x) noexcept { return static_cast<std::size_t>(x) / 64; }
  static unsigned bit(label_t x) noexcept { return static_cast<unsigned>(x % 64); }

  std::int64_t q_ = 0;
  std::int64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

/// The label the last unlabeled edge at a vertex must take, given the sum of
/// its three labeled edges. nullopt when that value is out of range or used.
inline std::optional<label_t> forced_value(std::int64_t target, std::int64_t partial_sum,
                                           const label_pool& unused) {
  const auto x = target - partial_sum;
  if (!unused.contains(x)) return std::nullopt;
  return x;
}

/// Whether r distinct unused labels could bring partial_sum up to target.
/// Exact for r <= 2, a min/max bound for r >= 3.
inline bool completion_feasible(std::int64_t target, std::int64_t partial_sum, int r,
                                const label_pool& unused) {
  const auto need = target - partial_sum;
  switch (r) {
    case 0:
      return need == 0;
    case 1:
      return unused.contains(need);
    case 2:
      return unused.has_pair(need);
    default: {
      const auto lo = unused.smallest_sum(r);
      const auto hi = unused.largest_sum(r);
      return lo && hi && *lo <= need && need <= *hi;
    }
  }
}

/// A labeling under construction together with its pool of unused labels.
class partial_labeling {
 public:
  explicit partial_labeling(const grid_dims& g) : lab_(g), unused_(g.q) {}

  /// Adopts the nonzero entries of `lab` as fixed labels. Throws value_error
  /// if they repeat or fall outside 1..q.
  explicit partial_labeling(const labeling& lab) : lab_(lab.dims()), unused_(lab.dims().q) {
    for (std::size_t idx = 0; idx < lab.values().size(); ++idx) {
      if (const auto x = lab.values()[idx]; x != 0) assign(edge_at(lab.dims(), idx), x);
    }
  }

  const grid_dims& dims() const noexcept { return lab_.dims(); }
  const labeling& current() const noexcept { return lab_; }
  const label_pool& unused() const noexcept { return unused_; }
  std::int64_t target() const noexcept { return lab_.dims().magic_constant(); }

  void assign(const edge_ref& e, label_t x) {
    if (lab_[e] != 0) throw value_error(to_string(e) + " is already labeled");
    if (!unused_.contains(x)) throw value_error("label " + std::to_string(x) + " is not available");
    lab_[e] = x;
    unused_.take(x);
  }

  void clear(const edge_ref& e) {
    if (const auto x = std::exchange(lab_[e], 0); x != 0) unused_.give(x);
  }

  /// Sum of labeled incident edges and count of unlabeled ones.
  std::pair<std::int64_t, int> vertex_state(const vertex_ref& v) const {
    std::int64_t s = 0;
    int free = 0;
    for (const auto& e : incident_edges(v, dims())) {
      if (lab_[e] == 0) {
        ++free;
      } else {
        s += lab_[e];
      }
    }
    return {s, free};
  }

 private:
  labeling lab_;
  label_pool unused_;
};

/// Unit propagation at a vertex with exactly three labeled edges.
inline std::optional<label_t> forced_label(const partial_labeling& p, const vertex_ref& v) {
  const auto [s, free] = p.vertex_state(v);
  if (free != 1) throw std::invalid_argument("forced_label needs exactly one unlabeled edge at " + to_string(v));
  return forced_value(p.target(), s, p.unused());
}

/// Range/pair pruning at a vertex with one to three unlabeled edges.
inline bool feasible_completion(const partial_labeling& p, const vertex_ref& v) {
  const auto [s, free] = p.vertex_state(v);
  return completion_feasible(p.target(), s, free, p.unused());
}

enum class value_order { ascending, descending, seeded_random };
enum class restart_policy { none, luby };

struct search_config {
  std::uint64_t node_budget = 100'000'000;
  double time_budget = 600.0;  // seconds
  value_order order = value_order::ascending;
  std::uint64_t seed = 0;
  restart_policy restarts = restart_policy::none;
  std::uint64_t restart_unit = 4096;  // nodes per Luby unit
  unsigned workers = 1;
};

enum class search_status { found, exhausted, budget_exceeded };

inline std::string to_string(search_status s) {
  switch (s) {
    case search_status::found:
      return "found";
    case search_status::exhausted:
      return "exhausted";
    default:
      return "budget-exceeded";
  }
}

struct prune_counts {
  std::uint64_t range = 0;   // forced value out of 1..q or already used
  std::uint64_t weight = 0;  // fully labeled vertex with the wrong sum
  std::uint64_t pair = 0;    // no unused pair completes a vertex
  std::uint64_t bound = 0;   // remaining sum outside the min/max bound

  prune_counts& operator+=(const prune_counts& o) noexcept {
    range += o.range;
    weight += o.weight;
    pair += o.pair;
    bound += o.bound;
    return *this;
  }
};

struct search_stats {
  std::uint64_t nodes = 0;
  std::uint64_t max_depth = 0;
  std::uint64_t restarts = 0;
  prune_counts prunes;
  double elapsed = 0.0;  // seconds
};

struct search_outcome {
  search_status status = search_status::budget_exceeded;
  std::optional<labeling> lab;
  search_stats stats;
  std::string symmetry;  // symmetry breaking in force, for Exhausted claims
};

/// Luby sequence 1,1,2,1,1,2,4,1,1,2,... (1-based).
inline std::uint64_t luby(std::uint64_t i) {
  for (std::uint64_t k = 1;; ++k) {
    const auto full = (std::uint64_t{1} << k) - 1;
    if (i == full) return std::uint64_t{1} << (k - 1);
    if (i < full) return luby(i - (full >> 1));
  }
}

namespace detail {

// Shared limits and stop flags for one search run.
struct run_control {
  using clock = std::chrono::steady_clock;
  clock::time_point deadline;
  std::uint64_t node_limit = 0;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> found{false};
  std::atomic<bool> out_of_budget{false};
};

class engine {
 public:
  explicit engine(const grid_dims& g) : g_(g), target_(g.magic_constant()), pool_(g.q) {
    const auto nv = static_cast<std::size_t>(g.vertex_count());
    const auto ne = static_cast<std::size_t>(g.q);
    labels_.assign(ne, 0);
    ends_.resize(ne);
    rank_.resize(ne);
    inc_.resize(nv);
    sum_.assign(nv, 0);
    free_.assign(nv, 4);
    for (std::size_t e = 0; e < ne; ++e) {
      const auto ref = edge_at(g, e);
      const auto [a, b] = endpoints(ref, g);
      ends_[e] = {vertex_index(g, a), vertex_index(g, b)};
      // (i, j, orient) lexicographic
      rank_[e] = (static_cast<std::size_t>(ref.i - 1) * g.m + static_cast<std::size_t>(ref.j - 1)) * 2 +
                 (ref.orient == orientation::vertical ? 1 : 0);
    }
    for (std::size_t v = 0; v < nv; ++v) {
      const auto inc = incident_edges(vertex_at(g, v), g);
      for (std::size_t t = 0; t < 4; ++t) inc_[v][t] = edge_index(g, inc[t]);
    }
  }

  std::size_t trail_size() const noexcept { return trail_.size(); }
  bool complete() const noexcept { return trail_.size() == labels_.size(); }

  /// Assigns x to e and propagates. Returns false on contradiction; the
  /// caller undoes to its trail mark either way.
  bool assign(std::size_t e, label_t x) {
    queue_.clear();
    queue_.emplace_back(e, x);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const auto [edge, value] = queue_[head];
      if (labels_[edge] != 0) {
        if (labels_[edge] == value) continue;
        ++prunes_.range;
        return false;
      }
      if (!pool_.contains(value)) {
        ++prunes_.range;
        return false;
      }
      set(edge, value);
      for (const auto v : ends_[edge]) {
        if (free_[v] == 0) {
          if (sum_[v] != target_) {
            ++prunes_.weight;
            return false;
          }
        } else if (free_[v] == 1) {
          const auto y = target_ - sum_[v];
          if (!pool_.contains(y)) {
            ++prunes_.range;
            return false;
          }
          queue_.emplace_back(unlabeled_at(v), y);
        }
      }
    }
    return globally_feasible();
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto e = trail_.back();
      trail_.pop_back();
      const auto x = std::exchange(labels_[e], 0);
      pool_.give(x);
      for (const auto v : ends_[e]) {
        sum_[v] -= x;
        ++free_[v];
      }
    }
  }

  /// Branching edge: the first unlabeled edge (by rank) at the vertex with
  /// the fewest unlabeled edges, ties to the lowest vertex index.
  std::optional<std::size_t> pick_edge() const {
    std::size_t best_v = 0;
    int best_free = 5;
    for (std::size_t v = 0; v < free_.size(); ++v) {
      if (free_[v] > 0 && free_[v] < best_free) {
        best_free = free_[v];
        best_v = v;
        if (best_free == 1) break;
      }
    }
    if (best_free == 5) return std::nullopt;
    std::optional<std::size_t> best;
    for (const auto e : inc_[best_v]) {
      if (labels_[e] == 0 && (!best || rank_[e] < rank_[*best])) best = e;
    }
    return best;
  }

  std::vector<label_t> candidates(value_order order, std::mt19937_64& rng) const {
    std::vector<label_t> out;
    out.reserve(static_cast<std::size_t>(pool_.size()));
    pool_.for_each([&](label_t x) { out.push_back(x); });
    if (order == value_order::descending) std::reverse(out.begin(), out.end());
    if (order == value_order::seeded_random) std::shuffle(out.begin(), out.end(), rng);
    return out;
  }

  labeling snapshot() const { return labeling(g_, labels_); }
  const prune_counts& prunes() const noexcept { return prunes_; }
  const grid_dims& dims() const noexcept { return g_; }

 private:
  void set(std::size_t e, label_t x) {
    labels_[e] = x;
    pool_.take(x);
    trail_.push_back(e);
    for (const auto v : ends_[e]) {
      sum_[v] += x;
      --free_[v];
    }
  }

  std::size_t unlabeled_at(std::size_t v) const {
    for (const auto e : inc_[v]) {
      if (labels_[e] == 0) return e;
    }
    return inc_[v][0];  // unreachable while free_[v] > 0
  }

  bool globally_feasible() {
    for (std::size_t v = 0; v < free_.size(); ++v) {
      const int r = free_[v];
      if (r < 2) continue;
      if (!completion_feasible(target_, sum_[v], r, pool_)) {
        ++(r == 2 ? prunes_.pair : prunes_.bound);
        return false;
      }
    }
    return true;
  }

  grid_dims g_;
  std::int64_t target_;
  label_pool pool_;
  std::vector<label_t> labels_;
  std::vector<std::array<std::size_t, 2>> ends_;
  std::vector<std::size_t> rank_;
  std::vector<std::array<std::size_t, 4>> inc_;
  std::vector<std::int64_t> sum_;
  std::vector<int> free_;
  std::vector<std::size_t> trail_;
  std::vector<std::pair<std::size_t, label_t>> queue_;
  prune_counts prunes_;
};

// Depth-first search below the current engine state. `on_solution` returns
// true to stop. Returns false if the run was cut short by a limit.
class dfs {
 public:
  dfs(engine& eng, run_control& ctl, value_order order, std::uint64_t seed,
      std::function<bool(const labeling&)> on_solution)
      : eng_(eng), ctl_(ctl), order_(order), rng_(seed), on_solution_(std::move(on_solution)) {}

  // Returns true when the search should stop (solution accepted or limit hit).
  bool run(std::uint64_t depth = 0) {
    max_depth_ = std::max(max_depth_, depth);
    if (eng_.complete()) return on_solution_(eng_.snapshot());
    const auto e = eng_.pick_edge();
    if (!e) return false;
    for (const auto x : eng_.candidates(order_, rng_)) {
      if (stop_requested()) return true;
      const auto mark = eng_.trail_size();
      const bool ok = eng_.assign(*e, x);
      const bool stop = ok && run(depth + 1);
      eng_.undo_to(mark);
      if (stop) return true;
    }
    return false;
  }

  std::uint64_t max_depth() const noexcept { return max_depth_; }

 private:
  bool stop_requested() {
    const auto n = ctl_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if (ctl_.found.load(std::memory_order_relaxed) || ctl_.out_of_budget.load(std::memory_order_relaxed)) {
      return true;
    }
    if (n > ctl_.node_limit || ((n & 0xfff) == 0 && run_control::clock::now() > ctl_.deadline)) {
      ctl_.out_of_budget.store(true, std::memory_order_relaxed);
      return true;
    }
    return false;
  }

  engine& eng_;
  run_control& ctl_;
  value_order order_;
  std::mt19937_64 rng_;
  std::function<bool(const labeling&)> on_solution_;
  std::uint64_t max_depth_ = 0;
};

// One top-level subtree: a root pin plus the first branching value.
struct root_task {
  std::size_t pin_edge;
  std::optional<std::pair<std::size_t, label_t>> first;
};

}  // namespace detail

/// Searches for a supermagic labeling of C_n x C_m within the configured
/// budgets. A found labeling has already passed verify().
inline search_outcome search(int n, int m, const search_config& cfg = {}) {
  using clock = detail::run_control::clock;
  const auto g = dims(n, m);
  const auto started = clock::now();
  const auto deadline = started + std::chrono::duration_cast<clock::duration>(
                                      std::chrono::duration<double>(cfg.time_budget));

  search_outcome out;
  out.symmetry = g.n == g.m ? "label 1 pinned to H(1,1)"
                            : "label 1 pinned to H(1,1) or V(1,1)";

  std::vector<std::size_t> pins{edge_index(g, H(1, 1))};
  if (g.n != g.m) pins.push_back(edge_index(g, V(1, 1)));

  // Split the tree below each pin into one task per first branching value.
  std::vector<detail::root_task> tasks;
  {
    detail::engine eng(g);
    std::mt19937_64 rng(cfg.seed);
    for (const auto pin : pins) {
      if (!eng.assign(pin, 1)) {
        eng.undo_to(0);
        continue;
      }
      if (const auto e = eng.pick_edge(); e && !eng.complete()) {
        for (const auto x : eng.candidates(value_order::ascending, rng)) {
          tasks.push_back({pin, std::pair{*e, x}});
        }
      } else {
        tasks.push_back({pin, std::nullopt});
      }
      eng.undo_to(0);
    }
  }

  std::uint64_t total_nodes = 0;
  std::mutex merge;
  std::optional<labeling> winner;

  for (std::uint64_t iteration = 1;; ++iteration) {
    detail::run_control ctl;
    ctl.deadline = deadline;
    const auto remaining = cfg.node_budget > total_nodes ? cfg.node_budget - total_nodes : 0;
    const bool restarting = cfg.restarts == restart_policy::luby;
    const auto slice = restarting ? luby(iteration) * cfg.restart_unit : remaining;
    ctl.node_limit = std::min(remaining, slice);
    const auto order = restarting && cfg.order == value_order::ascending ? value_order::seeded_random
                                                                         : cfg.order;
    const auto iter_seed = cfg.seed + 0x9e3779b97f4a7c15ULL * iteration;

    // Task order is shuffled on restarts so each iteration starts elsewhere.
    std::vector<std::size_t> order_of_tasks(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) order_of_tasks[t] = t;
    if (order == value_order::seeded_random) {
      std::mt19937_64 rng(iter_seed);
      std::shuffle(order_of_tasks.begin(), order_of_tasks.end(), rng);
    } else if (order == value_order::descending) {
      // keep pins in order, reverse values within each pin
      std::stable_sort(order_of_tasks.begin(), order_of_tasks.end(), [&](auto a, auto b) {
        if (tasks[a].pin_edge != tasks[b].pin_edge) return a < b;
        return a > b;
      });
    }

    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<search_stats> per_worker(workers);
    auto work = [&](unsigned w) {
      detail::engine eng(g);
      auto& st = per_worker[w];
      for (std::size_t slot = w; slot < order_of_tasks.size(); slot += workers) {
        if (ctl.found.load() || ctl.out_of_budget.load()) break;
        const auto& task = tasks[order_of_tasks[slot]];
        const auto accept = [&](const labeling& lab) {
          std::lock_guard lock(merge);
          if (!winner) winner = lab;
          ctl.found.store(true);
          return true;
        };
        detail::dfs search_tree(eng, ctl, order, iter_seed ^ (order_of_tasks[slot] + 1), accept);
        if (eng.assign(task.pin_edge, 1)) {
          if (!task.first) {
            search_tree.run(1);
          } else {
            ctl.nodes.fetch_add(1, std::memory_order_relaxed);
            if (eng.assign(task.first->first, task.first->second)) search_tree.run(2);
          }
        }
        eng.undo_to(0);
        st.max_depth = std::max(st.max_depth, search_tree.max_depth());
      }
      st.prunes += eng.prunes();
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    total_nodes += std::min(ctl.nodes.load(), ctl.node_limit);
    for (const auto& st : per_worker) {
      out.stats.max_depth = std::max(out.stats.max_depth, st.max_depth);
      out.stats.prunes += st.prunes;
    }
    if (winner) {
      out.status = search_status::found;
      break;
    }
    if (!ctl.out_of_budget.load()) {
      out.status = search_status::exhausted;
      break;
    }
    const bool budget_left = total_nodes < cfg.node_budget && clock::now() < deadline;
    if (!restarting || !budget_left) {
      out.status = search_status::budget_exceeded;
      break;
    }
    ++out.stats.restarts;
  }

  out.stats.nodes = total_nodes;
  out.stats.elapsed = std::chrono::duration<double>(clock::now() - started).count();
  if (winner) {
    const auto rep = verify(*winner);
    if (!rep.is_supermagic || rep.constant != g.magic_constant()) {
      throw std::logic_error("search produced a labeling that fails verification");
    }
    out.lab = std::move(winner);
  }
  return out;
}

/// Every completion of a partial labeling to a supermagic one, without
/// symmetry breaking. Stops after `limit` solutions.
inline std::vector<labeling> complete_all(const labeling& partial,
                                          std::size_t limit = static_cast<std::size_t>(-1),
                                          search_stats* stats = nullptr) {
  const auto& g = partial.dims();
  detail::engine eng(g);
  detail::run_control ctl;
  ctl.deadline = detail::run_control::clock::time_point::max();
  ctl.node_limit = static_cast<std::uint64_t>(-1);

  std::vector<labeling> found;
  bool consistent = true;
  for (std::size_t idx = 0; idx < partial.values().size() && consistent; ++idx) {
    if (const auto x = partial.values()[idx]; x != 0) consistent = eng.assign(idx, x);
  }
  std::uint64_t depth = 0;
  if (consistent) {
    detail::dfs tree(eng, ctl, value_order::ascending, 0, [&](const labeling& lab) {
      found.push_back(lab);
      return found.size() >= limit;
    });
    tree.run();
    depth = tree.max_depth();
  }
  if (stats) {
    stats->nodes = ctl.nodes.load();
    stats->max_depth = depth;
    stats->prunes = eng.prunes();
  }
  return found;
}

}  // namespace torusmagic
