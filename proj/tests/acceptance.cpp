// Acceptance suite: one PASS/FAIL line per criterion.
//
// usage: acceptance [path-to-torusmagic-cli]
// The CLI path is needed for the exit-code half of criterion 9.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "torusmagic.hpp"

using namespace torusmagic;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct result {
  bool pass = true;
  bool blocking = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << why;
    pass = false;
  }
};

// 1 and 2: every instance verifies with constant 4nm + 2 in under a second.
result constructive_sweep(int lo, int hi, int step, bool need_gcd,
                          const std::function<labeling(const grid_dims&)>& build) {
  result r;
  int count = 0;
  double worst = 0.0;
  for (int n = lo; n <= hi; n += step) {
    for (int m = n; m <= hi; m += step) {
      if (need_gcd && std::gcd(n, m) == 1) continue;
      const auto t0 = clock_type::now();
      const auto g = dims(n, m);
      const auto rep = verify(build(g));
      const double t = seconds_since(t0);
      worst = std::max(worst, t);
      ++count;
      if (!rep.is_supermagic || rep.constant != 4 * std::int64_t{n} * m + 2 ||
          !rep.duplicate_or_missing.empty()) {
        r.fail("C_" + std::to_string(n) + " x C_" + std::to_string(m) + " failed verification; ");
      }
      if (t >= 1.0) r.fail("C_" + std::to_string(n) + " x C_" + std::to_string(m) + " took >= 1 s; ");
    }
  }
  r.detail << count << " instances, slowest " << worst << " s";
  return r;
}

result golden_instance() {
  result r;
  const auto lab = construct_odd_odd(dims(3, 3));
  const std::string expected =
      "{\n"
      "  \"n\": 3,\n"
      "  \"m\": 3,\n"
      "  \"horizontal\": [\n"
      "    [1, 4, 9],\n"
      "    [8, 2, 5],\n"
      "    [6, 7, 3]\n"
      "  ],\n"
      "  \"vertical\": [\n"
      "    [12, 18, 14],\n"
      "    [13, 10, 17],\n"
      "    [16, 15, 11]\n"
      "  ]\n"
      "}\n";
  if (encode(lab) != expected) r.fail("serialized matrices differ; ");
  const auto rep = verify(lab);
  if (rep.weights != std::vector<std::int64_t>(9, 38)) r.fail("vertex weights are not all 38; ");
  r.detail << "encoded bytes match, weights all 38";
  return r;
}

result corner_audit() {
  result r;
  const std::vector<std::pair<int, int>> shapes{{3, 3}, {3, 9}, {9, 15}, {5, 5}, {4, 4}, {4, 6}, {8, 12}};
  std::size_t corners = 0;
  for (auto [n, m] : shapes) {
    const auto made = std::get<constructed>(construct(n, m));
    const auto rep = audit_corners(made.lab, made.plan);
    corners += 2 * made.plan.start_cols.size() * static_cast<std::size_t>(made.lab.dims().l);
    if (!rep.clean) {
      r.fail("C_" + std::to_string(n) + " x C_" + std::to_string(m) + ": " +
             std::to_string(rep.mismatches.size()) + " mismatches; ");
    }
  }
  // a random swap of two distinct labels
  std::mt19937_64 rng(2024);
  int swaps_caught = 0;
  for (auto [n, m] : shapes) {
    auto made = std::get<constructed>(construct(n, m));
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(made.lab.dims().q) - 1);
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    std::swap(made.lab.values()[a], made.lab.values()[b]);
    if (audit_corners(made.lab, made.plan).mismatches.empty()) {
      r.fail("swap on C_" + std::to_string(n) + " x C_" + std::to_string(m) + " went unnoticed; ");
    } else {
      ++swaps_caught;
    }
  }
  r.detail << shapes.size() << " shapes, " << corners << " corners clean; " << swaps_caught
           << " random swaps detected";
  return r;
}

result decomposition_fuzz() {
  result r;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(3, 60);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng), m = size(rng);
    const auto g = dims(n, m);
    const auto diags = decompose(g);
    const auto tag = "C_" + std::to_string(n) + " x C_" + std::to_string(m) + ": ";
    if (diags.size() != static_cast<std::size_t>(std::gcd(n, m))) r.fail(tag + "wrong diagonal count; ");
    std::vector<int> hits(static_cast<std::size_t>(g.q), 0);
    for (const auto& dg : diags) {
      if (static_cast<std::int64_t>(dg.edges().size()) != 2 * std::lcm(n, m)) r.fail(tag + "wrong length; ");
      for (std::int64_t k = 1; k <= dg.length(); ++k) {
        ++hits[edge_index(g, dg.h(k))];
        ++hits[edge_index(g, dg.v(k))];
        if (diagonal_of_edge(dg.h(k), g) != diagonal_position{dg.index(), k, orientation::horizontal} ||
            diagonal_of_edge(dg.v(k), g) != diagonal_position{dg.index(), k, orientation::vertical}) {
          r.fail(tag + "diagonal_of_edge mismatch; ");
        }
      }
    }
    for (auto h : hits) {
      if (h != 1) {
        r.fail(tag + "edges not partitioned; ");
        break;
      }
    }
  }
  r.detail << "200 random shapes in [3,60]^2";
  return r;
}

result forced_constant_check() {
  result r;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(3, 500);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t n = size(rng), m = size(rng);
    if (forced_constant(dims(static_cast<int>(n), static_cast<int>(m))) != 2 * (2 * n * m + 1)) {
      r.fail("forced_constant wrong for " + std::to_string(n) + "x" + std::to_string(m) + "; ");
    }
  }
  // Adversarial labelings with uniform weight different from 4nm + 2.
  int rejected = 0, accepted_complements = 0;
  for (auto [n, m] : {std::pair{3, 3}, {4, 6}, {9, 15}, {6, 6}}) {
    const auto base = std::get<constructed>(construct(n, m)).lab;
    const auto q = base.dims().q;
    for (label_t shift : {1, 2, 5}) {
      auto lab = base;
      for (auto& x : lab.values()) x += shift;
      const auto rep = verify(lab);
      if (rep.is_supermagic) r.fail("shifted labeling accepted; ");
      else ++rejected;
    }
    auto doubled = base;
    for (auto& x : doubled.values()) x *= 2;
    if (verify(doubled).is_supermagic) r.fail("doubled labeling accepted; ");
    else ++rejected;
    // The complement q + 1 - f is again a bijection, and its weight is forced
    // back to 4nm + 2.
    auto complement = base;
    for (auto& x : complement.values()) x = q + 1 - x;
    const auto rep = verify(complement);
    if (!rep.is_supermagic || rep.constant != forced_constant(base.dims())) {
      r.fail("complement not accepted with the forced constant; ");
    } else {
      ++accepted_complements;
    }
  }
  r.detail << "100 shapes; " << rejected << " adversarial labelings rejected, " << accepted_complements
           << " complements accepted at 4nm+2";
  return r;
}

result search_reproduction(std::vector<std::string>& stretch_lines) {
  result r;
  {
    search_config cfg;
    cfg.time_budget = 5.0;
    const auto t0 = clock_type::now();
    const auto out = search(3, 3, cfg);
    const double t = seconds_since(t0);
    if (out.status != search_status::found || !verify(*out.lab).is_supermagic ||
        verify(*out.lab).constant != 38 || t >= 5.0) {
      r.fail("C3 x C3 not found within 5 s; ");
    }
    r.detail << "C3xC3 " << out.stats.nodes << " nodes " << t << " s; ";
  }
  search_config desk;
  desk.node_budget = 100'000'000;
  desk.time_budget = 600.0;
  {
    const auto out = search(3, 4, desk);
    if (out.status != search_status::found || verify(*out.lab).constant != 50) {
      r.fail("C3 x C4 status " + to_string(out.status) + "; ");
    }
    r.detail << "C3xC4 " << out.stats.nodes << " nodes " << out.stats.elapsed << " s";
  }
  for (int m : {5, 6}) {
    const auto out = search(3, m, desk);
    std::ostringstream line;
    const bool ok = out.status == search_status::found && verify(*out.lab).constant == 12 * m + 2;
    line << (ok ? "[PASS]" : "[INFO]") << " 7-stretch C3xC" << m << ": " << to_string(out.status) << ", "
         << out.stats.nodes << " nodes, " << out.stats.elapsed << " s (non-blocking)";
    stretch_lines.push_back(line.str());
  }
  return r;
}

result propagation_soundness() {
  result r;
  const auto full = construct_odd_odd(dims(3, 3));
  auto partial = full;
  for (std::size_t idx = 10; idx < 18; ++idx) partial.values()[idx] = 0;

  std::vector<label_t> missing(full.values().begin() + 10, full.values().end());
  std::sort(missing.begin(), missing.end());
  std::set<std::vector<label_t>> naive;
  std::size_t permutations = 0;
  do {
    ++permutations;
    auto lab = partial;
    std::copy(missing.begin(), missing.end(), lab.values().begin() + 10);
    if (verify(lab).is_supermagic) naive.insert({lab.values().begin(), lab.values().end()});
  } while (std::next_permutation(missing.begin(), missing.end()));

  std::set<std::vector<label_t>> pruned;
  for (const auto& lab : complete_all(partial)) pruned.insert({lab.values().begin(), lab.values().end()});
  if (pruned != naive) r.fail("solution sets differ; ");
  if (naive.count({full.values().begin(), full.values().end()}) != 1) r.fail("golden completion missing; ");
  r.detail << permutations << " permutations enumerated, " << naive.size() << " completions, pruned search agrees";
  return r;
}

int run_cli(const std::string& cli, const std::string& args) {
  const auto cmd = "\"" + cli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

result serialization(const std::string& cli) {
  result r;
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(3, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = dims(size(rng), size(rng));
    std::uniform_int_distribution<label_t> value(1, 4 * g.q);
    std::vector<label_t> xs(static_cast<std::size_t>(g.q));
    for (auto& x : xs) x = value(rng);
    const labeling lab(g, xs);
    const auto text = encode(lab);
    if (decode(text) != lab || encode(decode(text)) != text) r.fail("roundtrip failed; ");
  }

  const auto good = encode(construct_odd_odd(dims(3, 3)));
  struct malformed {
    std::string text;
    std::string expect;
  };
  std::string short_rows = good;
  short_rows.replace(short_rows.find("    [6, 7, 3]\n"), 14, "");
  short_rows.replace(short_rows.find("[8, 2, 5],"), 10, "[8, 2, 5]");
  std::string zero = good;
  zero.replace(zero.find("[1, 4, 9]"), 9, "[0, 4, 9]");
  const std::vector<malformed> cases{{"{\"n\": 3, \"m\": ", "parse"},
                                     {short_rows, "shape"},
                                     {zero, "value"},
                                     {"[1, 2, 3]", "parse"},
                                     {"3 3\nH 1 9 4\n", "shape"}};
  int typed = 0, exit_ones = 0;
  const auto dir = std::filesystem::temp_directory_path() / "torusmagic_acceptance";
  std::filesystem::create_directories(dir);
  for (std::size_t t = 0; t < cases.size(); ++t) {
    std::string kind = "none";
    try {
      decode(cases[t].text);
    } catch (const parse_error&) {
      kind = "parse";
    } catch (const shape_error&) {
      kind = "shape";
    } catch (const value_error&) {
      kind = "value";
    }
    if (kind != cases[t].expect) {
      r.fail("case " + std::to_string(t) + " raised " + kind + " instead of " + cases[t].expect + "; ");
    } else {
      ++typed;
    }
    if (!cli.empty()) {
      const auto path = dir / ("bad" + std::to_string(t) + ".json");
      std::ofstream(path) << cases[t].text;
      if (run_cli(cli, "verify \"" + path.string() + "\"") == 1) {
        ++exit_ones;
      } else {
        r.fail("CLI exit code for case " + std::to_string(t) + " is not 1; ");
      }
    }
  }
  if (cli.empty()) r.fail("CLI path not given; ");
  r.detail << "100 roundtrips; " << typed << "/" << cases.size() << " typed errors; " << exit_ones
           << " CLI exits = 1";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::vector<std::string> stretch;
  struct row {
    const char* id;
    const char* name;
    std::function<result()> run;
  };
  const std::vector<row> rows{
      {"1", "constructive sweep odd/odd", [] { return constructive_sweep(3, 27, 2, true, construct_odd_odd); }},
      {"2", "constructive sweep even/even", [] { return constructive_sweep(4, 24, 2, false, construct_even_even); }},
      {"3", "golden C3xC3 instance", golden_instance},
      {"4", "corner audit", corner_audit},
      {"5", "decomposition fuzz", decomposition_fuzz},
      {"6", "forced constant", forced_constant_check},
      {"7", "search reproduction", [&] { return search_reproduction(stretch); }},
      {"8", "propagation soundness", propagation_soundness},
      {"9", "serialization", [&] { return serialization(cli); }},
  };

  int failures = 0;
  for (const auto& rw : rows) {
    result res;
    try {
      res = rw.run();
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    if (!res.pass && res.blocking) ++failures;
    std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << rw.id << " " << rw.name << ": " << res.detail.str()
              << std::endl;
    if (std::string(rw.id) == "7") {
      for (const auto& line : stretch) std::cout << line << std::endl;
    }
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: failures") << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
