// torusmagic: construct, verify, audit, search and draw supermagic labelings
// of C_n x C_m.
//
// Exit codes:
//   0  success (labeling generated / supermagic / audit clean / found)
//   1  usage, I/O or parse error
//   2  generate: no explicit construction for this shape
//   3  search: budget exceeded
//   4  search: space exhausted under the documented symmetry breaking
//   5  verify/audit: the labeling failed the check

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "torusmagic.hpp"

namespace {

using namespace torusmagic;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_unsupported = 2;
constexpr int exit_budget = 3;
constexpr int exit_exhausted = 4;
constexpr int exit_check_failed = 5;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

std::string grid_name(const grid_dims& g) {
  return "C_" + std::to_string(g.n) + " x C_" + std::to_string(g.m);
}

int cmd_generate(int n, int m, const std::string& out_path) {
  const auto result = construct(n, m);
  if (const auto* no = std::get_if<unsupported>(&result)) {
    std::cerr << "generate: " << no->message << "\n";
    return exit_unsupported;
  }
  const auto& made = std::get<constructed>(result);
  const auto rep = verify(made.lab);
  if (!rep.is_supermagic) throw std::logic_error("constructed labeling failed verification");
  document_metadata meta{"construct", to_string(made.plan.variant), rep.constant};
  write_output(out_path, encode(made.lab, meta));
  return exit_ok;
}

int cmd_verify(const std::string& path) {
  const auto doc = decode_document(read_input(path));
  const auto& g = doc.lab.dims();
  std::cout << "grid: " << grid_name(g) << " (q = " << g.q << ")\n";

  verification_report rep;
  try {
    rep = verify(doc.lab);
  } catch (const domain_mismatch& e) {
    std::cout << "supermagic: no\n";
    std::cerr << "verify: " << e.what() << "\n";
    return exit_check_failed;
  }
  const auto target = forced_constant(g);
  std::cout << "bijection: " << (rep.is_bijection ? "yes" : "no") << "\n";
  if (!rep.is_bijection) {
    std::cout << "offending labels:";
    for (auto x : rep.duplicate_or_missing) std::cout << " " << x;
    std::cout << "\n";
  }
  if (rep.constant) {
    std::cout << "constant: " << *rep.constant << " (forced " << target << ")\n";
  } else {
    std::cout << "constant: none (forced " << target << ")\n";
  }
  for (const auto& v : rep.off_weight) {
    std::cout << "vertex " << to_string(v) << ": weight " << rep.weights[vertex_index(g, v)]
              << " != " << target << "\n";
  }
  std::cout << "supermagic: " << (rep.is_supermagic ? "yes" : "no") << "\n";
  return rep.is_supermagic ? exit_ok : exit_check_failed;
}

int cmd_audit(const std::string& path, const std::string& plan_name) {
  const auto doc = decode_document(read_input(path));
  const auto variant = plan_name == "odd-odd" ? plan_variant::odd_odd : plan_variant::even_even;
  const auto plan = make_plan(variant, doc.lab.dims());
  const auto rep = audit_corners(doc.lab, plan);
  for (const auto& mm : rep.mismatches) {
    std::cout << to_string(mm.corner) << " at " << to_string(mm.at) << ": expected " << mm.expected
              << ", actual " << mm.actual << "\n";
  }
  std::cout << "corners: " << 2 * plan.start_cols.size() * static_cast<std::size_t>(doc.lab.dims().l)
            << ", mismatches: " << rep.mismatches.size() << "\n";
  std::cout << "clean: " << (rep.clean ? "yes" : "no") << "\n";
  return rep.clean ? exit_ok : exit_check_failed;
}

int cmd_search(int n, int m, const search_config& cfg, const std::string& out_path) {
  const auto out = search(n, m, cfg);
  const auto& st = out.stats;
  std::cerr << "status: " << to_string(out.status) << "\n"
            << "nodes: " << st.nodes << ", max depth: " << st.max_depth
            << ", restarts: " << st.restarts << ", elapsed: " << st.elapsed << " s\n"
            << "prunes: range " << st.prunes.range << ", weight " << st.prunes.weight << ", pair "
            << st.prunes.pair << ", bound " << st.prunes.bound << "\n"
            << "symmetry breaking: " << out.symmetry << "\n";
  switch (out.status) {
    case search_status::found: {
      document_metadata meta{"search seed=" + std::to_string(cfg.seed), std::nullopt,
                             out.lab->dims().magic_constant()};
      write_output(out_path, encode(*out.lab, meta));
      return exit_ok;
    }
    case search_status::exhausted:
      return exit_exhausted;
    default:
      return exit_budget;
  }
}

int cmd_decompose(int n, int m) {
  const auto g = dims(n, m);
  std::cout << grid_name(g) << ": l = " << g.l << ", d = " << g.d << ", q = " << g.q << "\n";
  for (const auto& dg : decompose(g)) {
    std::cout << "D" << dg.index() << " start=" << dg.start_col() << ":";
    for (const auto& e : dg.edges()) std::cout << " " << to_string(e);
    std::cout << "\n";
  }
  return exit_ok;
}

int cmd_render(const std::string& path, const render_spec& spec, const std::string& out_path) {
  const auto doc = decode_document(read_input(path));
  write_output(out_path, render(doc.lab, spec));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supermagic labelings of the torus grid C_n x C_m"};
  app.require_subcommand(1);

  int n = 0, m = 0;
  std::string file, out_path, plan_name;
  auto add_dims = [&](CLI::App* sub) {
    sub->add_option("N", n, "first cycle length (rows)")->required()->check(CLI::PositiveNumber);
    sub->add_option("M", m, "second cycle length (columns)")->required()->check(CLI::PositiveNumber);
  };

  auto* generate = app.add_subcommand("generate", "build a labeling from the explicit constructions");
  add_dims(generate);
  generate->add_option("--out", out_path, "output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "check that a labeling is supermagic");
  verify_cmd->add_option("FILE", file, "labeling document, '-' for stdin")->required();

  auto* audit = app.add_subcommand("audit", "compare corner partial weights with a construction plan");
  audit->add_option("FILE", file, "labeling document")->required();
  audit->add_option("--plan", plan_name, "odd-odd or even-even")
      ->required()
      ->check(CLI::IsMember({"odd-odd", "even-even"}));

  search_config cfg;
  std::string order_name = "ascending", restart_name = "none";
  auto* search_cmd = app.add_subcommand("search", "backtracking search for a labeling");
  add_dims(search_cmd);
  search_cmd->add_option("--seed", cfg.seed, "seed for randomized value order and restarts");
  search_cmd->add_option("--node-budget", cfg.node_budget, "maximum decision nodes")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--time-budget", cfg.time_budget, "wall-clock seconds")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--order", order_name, "value order")
      ->check(CLI::IsMember({"ascending", "descending", "random"}));
  search_cmd->add_option("--restarts", restart_name, "restart policy")
      ->check(CLI::IsMember({"none", "luby"}));
  search_cmd->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  search_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* decompose_cmd = app.add_subcommand("decompose", "print the diagonal decomposition");
  add_dims(decompose_cmd);

  std::string format_name = "dot", annotate_name = "labels";
  bool highlight = false;
  auto* render_cmd = app.add_subcommand("render", "draw a labeling as DOT or SVG");
  render_cmd->add_option("FILE", file, "labeling document")->required();
  render_cmd->add_option("--format", format_name, "dot or svg")->check(CLI::IsMember({"dot", "svg"}));
  render_cmd->add_option("--annotate", annotate_name, "vertex captions")
      ->check(CLI::IsMember({"labels", "weights", "corners"}));
  render_cmd->add_flag("--highlight-diagonals", highlight, "color edges by diagonal");
  render_cmd->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*generate) return cmd_generate(n, m, out_path);
    if (*verify_cmd) return cmd_verify(file);
    if (*audit) return cmd_audit(file, plan_name);
    if (*search_cmd) {
      static const std::map<std::string, value_order> orders{
          {"ascending", value_order::ascending},
          {"descending", value_order::descending},
          {"random", value_order::seeded_random}};
      cfg.order = orders.at(order_name);
      cfg.restarts = restart_name == "luby" ? restart_policy::luby : restart_policy::none;
      return cmd_search(n, m, cfg, out_path);
    }
    if (*decompose_cmd) return cmd_decompose(n, m);
    if (*render_cmd) {
      render_spec spec;
      spec.format = format_name == "svg" ? render_format::svg : render_format::dot;
      spec.annotate = annotate_name == "weights"   ? annotation::weights
                      : annotate_name == "corners" ? annotation::corners
                                                   : annotation::labels;
      spec.highlight_diagonals = highlight;
      return cmd_render(file, spec, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
