// cpwlkit command-line driver.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cpwlkit/compile.hpp"
#include "cpwlkit/cpwl.hpp"
#include "cpwlkit/decompose.hpp"
#include "cpwlkit/depthgate.hpp"
#include "cpwlkit/geometry.hpp"

namespace {

using namespace cpwlkit;
using linalg::Rational;
using linalg::RatVector;
namespace fs = std::filesystem;

// Errors carrying the file they came from, for "file:line:col:" output.
struct FileParseError : ParseError {
  FileParseError(std::string file, const ParseError& e) : ParseError(e), file(std::move(file)) {}
  std::string file;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write '" + path + "'");
  out << text;
}

/// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

template <class F>
auto parsing(const std::string& file, F&& f) {
  try {
    return f();
  } catch (const FileParseError&) {
    throw;
  } catch (const ParseError& e) {
    throw FileParseError(file, e);
  }
}

cpwl::CpwlExpr load_expr(const std::string& path, std::optional<std::size_t> dim) {
  const std::string text = read_file(path);
  return parsing(path, [&] { return cpwl::parse_expr(text, dim); });
}

nlohmann::json load_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FileParseError(path, ParseError(e.what(), 0, e.byte));
  }
}

compile::ReluNetwork load_net(const std::string& path) {
  const auto j = load_json(path);
  return parsing(path, [&] { return compile::network_from_json(j); });
}

/// "3,5" or "1/2, -3" as a point.
RatVector parse_point(const std::string& text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    try {
      out.push_back(item.find_first_of(".eE") == std::string::npos ? Rational::parse(item)
                                                                    : Rational::parse_decimal(item));
    } catch (const std::exception&) {
      throw FileParseError("--at", ParseError("malformed coordinate '" + item + "'", 1, start + 1));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return RatVector(std::move(out));
}

std::string stats_line(const compile::ReluNetwork& net) {
  const auto s = compile::network_stats(net);
  return "depth " + std::to_string(s.depth) + "  width " + std::to_string(s.width) + "  size " +
         std::to_string(s.size) + "  hidden layers " + std::to_string(net.hidden_depth());
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

/// First sampled point where net and f differ.
std::optional<RatVector> first_disagreement(const compile::ReluNetwork& net, const cpwl::CpwlExpr& f,
                                            std::size_t samples, std::uint64_t seed) {
  cpwl::RationalSampler sampler(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const RatVector x = sampler.point(f.dim());
    if (compile::eval_network(net, x) != f(x)) return x;
  }
  return std::nullopt;
}

std::string table_text() {
  const depthgate::BasisTable t = depthgate::basis_table();
  const auto& rays = t.ray_set;
  std::ostringstream out;
  const int w = 6;
  out << std::setw(12) << "g_M \\ r_S";
  for (const auto& S : rays.subsets) out << std::setw(w) << depthgate::label(S);
  out << std::setw(w + 2) << "phi" << "\n";
  for (std::size_t f = 0; f < t.functions.size(); ++f) {
    out << std::setw(12) << depthgate::to_string(t.functions[f]);
    for (std::size_t r = 0; r < rays.size(); ++r) out << std::setw(w) << t.values(f, r).str();
    out << std::setw(w + 2) << depthgate::phi(depthgate::column_values(t, f)).str() << "\n";
  }
  out << std::setw(12) << "(-1)^|S|";
  for (const auto& S : rays.subsets) out << std::setw(w) << (S.size() % 2 == 0 ? "1" : "-1");
  out << "\n";
  out << "rank " << linalg::rank(t.values) << "; |M| <= 2: " << t.small.size()
      << " functions; phi vanishes on the " << t.all_but_full.size() << " functions other than "
      << depthgate::to_string(t.functions.back()) << "\n";
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"Exact tools for continuous piecewise-linear functions and ReLU networks"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  app.add_option("--seed", seed, "Seed for sampled checks")->capture_default_str();
  app.add_option("--samples", samples, "Number of random points for sampled checks")->capture_default_str();

  std::optional<std::size_t> dim;
  auto add_dim = [&](CLI::App* c) { c->add_option("--dim", dim, "Input dimension (default: largest variable index)"); };

  // eval
  std::string expr_file, at;
  auto* eval = app.add_subcommand("eval", "Evaluate an expression at a point");
  eval->add_option("expr", expr_file, "Expression file")->required();
  eval->add_option("--at", at, "Point, comma separated")->required();
  add_dim(eval);
  eval->callback([&] {
    const auto f = load_expr(expr_file, dim);
    std::cout << f(parse_point(at)).str() << "\n";
  });

  // pieces
  auto* pieces = app.add_subcommand("pieces", "List the affine pieces of an expression");
  pieces->add_option("expr", expr_file, "Expression file")->required();
  add_dim(pieces);
  pieces->callback([&] {
    for (const auto& p : cpwl::enumerate_pieces(load_expr(expr_file, dim))) std::cout << cpwl::to_string(p) << "\n";
  });

  // decompose
  std::string out_file, sidecar_file;
  std::optional<std::size_t> max_terms;
  auto* dec = app.add_subcommand("decompose", "Rewrite every max term with at most n+1 affine terms");
  dec->add_option("expr", expr_file, "Expression file")->required();
  dec->add_option("--max-terms", max_terms, "Leave max terms of at most this size alone (>= n+1; default n+1)");
  dec->add_option("-o,--output", out_file, "Output expression file (default: <input>.decomposed.expr)");
  dec->add_option("--coeffs", sidecar_file, "Coefficient sidecar (default: <input>.coeffs.json)");
  add_dim(dec);
  dec->callback([&] {
    const auto f = load_expr(expr_file, dim);
    const std::size_t limit = max_terms.value_or(f.dim() + 1);
    require(limit >= f.dim() + 1, "decompose: --max-terms must be at least n+1 = " + std::to_string(f.dim() + 1));
    cpwl::CpwlExpr result(f.dim());
    nlohmann::json sidecar = nlohmann::json::array();
    for (std::size_t i = 0; i < f.summands().size(); ++i) {
      const auto& s = f.summands()[i];
      nlohmann::json entry = {{"summand", i + 1}, {"coeff", s.coeff.str()}, {"term", cpwl::to_string(s.term)}};
      if (s.term.size() <= limit) {
        result += cpwl::CpwlExpr(s.term, s.coeff);
        entry["decomposition"] = nullptr;
      } else {
        const auto d = decompose::reduce_to_nplus1(s.term);
        result += s.coeff * d.expr;
        entry["decomposition"] = decompose::coefficients_json(d);
        entry["steps"] = d.steps;
        entry["max_abs_coeff"] = d.max_abs_coeff.str();
      }
      sidecar.push_back(std::move(entry));
    }
    const std::string out_path = out_file.empty() ? sibling(expr_file, ".decomposed.expr") : out_file;
    const std::string side_path = sidecar_file.empty() ? sibling(expr_file, ".coeffs.json") : sidecar_file;
    const std::string text = cpwl::to_string(result) + "\n";
    emit(out_path, text);
    write_file(side_path, sidecar.dump(2) + "\n");
    if (out_path != "-") std::cout << text;
  });

  // convexify
  bool from_pieces = false;
  auto* cvx = app.add_subcommand("convexify", "Write f = g - h with g, h convex");
  cvx->add_option("expr", expr_file, "Expression file")->required();
  cvx->add_flag("--from-pieces", from_pieces, "Use h = sum of pairwise maxima over the affine pieces of f");
  add_dim(cvx);
  cvx->callback([&] {
    const auto f = load_expr(expr_file, dim);
    const auto [g, h] = from_pieces ? decompose::convexify(f, cpwl::enumerate_pieces(f)) : decompose::split_by_sign(f);
    std::cout << "g = " << g << "\nh = " << h << "\n";
    for (const auto* part : {&g, &h}) {
      const auto report = cpwl::check_convex_sampled(*part, samples, seed);
      std::cout << (part == &g ? "g" : "h") << " convex on " << samples << " samples: " << (report.convex ? "yes" : "NO")
                << "\n";
      require(report.convex, "convexify: result failed the sampled convexity check");
    }
  });

  // compile
  bool min_depth = false;
  std::string route = "sign";
  auto* cmp = app.add_subcommand("compile", "Compile an expression into a ReLU network");
  cmp->add_option("expr", expr_file, "Expression file")->required();
  cmp->add_flag("--min-depth", min_depth, "Use at most ceil(log2(n+1)) hidden layers");
  cmp->add_option("--route", route, "Split used with --min-depth")->check(CLI::IsMember({"sign", "pieces"}))->capture_default_str();
  cmp->add_option("-o,--output", out_file, "Network JSON (default: stdout)");
  add_dim(cmp);
  cmp->callback([&] {
    const auto f = load_expr(expr_file, dim);
    const auto net = min_depth ? compile::compile_min_depth(
                                     f, route == "sign" ? compile::SplitRoute::BySign : compile::SplitRoute::Convexify)
                               : compile::compile_expr(f);
    const auto bad = first_disagreement(net, f, samples, seed);
    require(!bad, "compile: network disagrees with the expression (internal error)");
    emit(out_file, nlohmann::json(net).dump(2) + "\n");
    (out_file.empty() || out_file == "-" ? std::cerr : std::cout)
        << stats_line(net) << "  (checked at " << samples << " points)\n";
  });

  // net ...
  auto* net_cmd = app.add_subcommand("net", "Operations on network JSON files");
  net_cmd->require_subcommand(1);
  std::string net_file;
  auto net_arg = [&](CLI::App* c) { c->add_option("net", net_file, "Network JSON file")->required(); };

  auto* net_eval = net_cmd->add_subcommand("eval", "Evaluate a network at a point");
  net_arg(net_eval);
  net_eval->add_option("--at", at, "Point, comma separated")->required();
  net_eval->callback([&] { std::cout << compile::eval_network(load_net(net_file), parse_point(at)).str() << "\n"; });

  auto* net_hom = net_cmd->add_subcommand("homogenize", "Zero every bias");
  net_arg(net_hom);
  net_hom->add_option("-o,--output", out_file, "Output JSON (default: stdout)");
  net_hom->callback([&] { emit(out_file, nlohmann::json(compile::homogenize(load_net(net_file))).dump(2) + "\n"); });

  auto* net_newton = net_cmd->add_subcommand("newton", "Newton polytopes P, Q with f = h_P - h_Q");
  net_arg(net_newton);
  net_newton->add_option("-o,--output", out_file, "Output JSON (default: stdout)");
  net_newton->callback([&] {
    const auto pair = geometry::newton_pair_of_network(load_net(net_file));
    nlohmann::json j = {{"P", pair.P}, {"Q", pair.Q}};
    emit(out_file, j.dump(2) + "\n");
    if (!out_file.empty() && out_file != "-")
      std::cout << "P: " << pair.P.size() << " vertices, Q: " << pair.Q.size() << " vertices\n";
  });

  auto* net_dot = net_cmd->add_subcommand("dot", "Graphviz rendering");
  net_arg(net_dot);
  net_dot->callback([&] { std::cout << compile::to_dot(load_net(net_file)); });

  auto* net_stats = net_cmd->add_subcommand("stats", "Depth, width and size");
  net_arg(net_stats);
  net_stats->callback([&] { std::cout << stats_line(load_net(net_file)) << "\n"; });

  // witness
  std::size_t witness_n = 4;
  auto* wit = app.add_subcommand("witness", "Two-layer-deeper witness function and its network");
  wit->add_option("--n", witness_n, "Input dimension, a power of two >= 4")->capture_default_str();
  wit->add_option("-o,--output", out_file, "Network JSON (default: not written)");
  wit->callback([&] {
    const auto w = compile::richer_witness(witness_n);
    std::cout << "f = " << w.expr << "\n" << stats_line(w.net) << "\n";
    const auto bad = first_disagreement(w.net, w.expr, samples, seed);
    require(!bad, "witness: network disagrees with the expression (internal error)");
    std::cout << "agrees at " << samples << " random points\n";
    if (!out_file.empty()) emit(out_file, nlohmann::json(w.net).dump(2) + "\n");
  });

  // mip ...
  auto* mip = app.add_subcommand("mip", "The conformity MIP");
  mip->require_subcommand(1);
  auto* mip_build = mip->add_subcommand("build", "Emit the MIP as fixed-format MPS");
  mip_build->add_option("-o,--output", out_file, "MPS file (default: stdout)");
  mip_build->callback([&] { emit(out_file, depthgate::emit_mps(depthgate::build_mip())); });

  auto* mip_2d = mip->add_subcommand("analog2d", "Emit the planar analog as MPS");
  mip_2d->add_option("-o,--output", out_file, "MPS file (default: stdout)");
  mip_2d->callback([&] { emit(out_file, depthgate::emit_mps(depthgate::build_mip_analog_2d())); });

  std::string model_file, resume_file, checkpoint_file;
  std::uint64_t nodes = 10'000'000;
  std::string branch = "most-fractional", order = "best-bound";
  std::size_t progress = 0;
  auto* mip_solve = mip->add_subcommand("solve", "Exact branch-and-bound on an MPS model");
  mip_solve->add_option("model", model_file, "MPS file")->required();
  mip_solve->add_option("--nodes", nodes, "Node budget for this session")->capture_default_str();
  mip_solve->add_option("--resume", resume_file, "Continue from a checkpoint");
  mip_solve->add_option("--checkpoint", checkpoint_file, "Write the search state here (default: the --resume file)");
  mip_solve->add_option("--branch", branch, "Branching rule")
      ->check(CLI::IsMember({"most-fractional", "first-fractional"}))
      ->capture_default_str();
  mip_solve->add_option("--order", order, "Node selection")
      ->check(CLI::IsMember({"best-bound", "depth-first"}))
      ->capture_default_str();
  mip_solve->add_option("--progress", progress, "Print the bound every N nodes");
  mip_solve->callback([&] {
    const std::string text = read_file(model_file);
    const auto model = parsing(model_file, [&] { return depthgate::parse_mps(text); });
    depthgate::MipOptions options;
    options.node_budget = nodes;
    options.branch = branch == "most-fractional" ? depthgate::BranchRule::MostFractional
                                                 : depthgate::BranchRule::FirstFractional;
    options.order = order == "best-bound" ? depthgate::NodeOrder::BestBound : depthgate::NodeOrder::DepthFirst;
    if (progress > 0)
      options.on_node = [&](const depthgate::NodeEvent& e) {
        if (e.node % progress == 0)
          std::cerr << "node " << e.node << "  bound " << e.bound.str() << "  open " << e.open << std::endl;
      };
    std::optional<depthgate::BnbState> resume;
    if (!resume_file.empty()) {
      const auto j = load_json(resume_file);
      resume = parsing(resume_file, [&] { return depthgate::bnb_state_from_json(j); });
    }

    // The conformity models get decode-and-verify on the incumbent.
    std::optional<depthgate::ConformityMip> known;
    for (auto candidate : {depthgate::build_mip_structured(), depthgate::build_mip_analog_2d_structured()})
      if (depthgate::detail::model_digest(candidate.model) == depthgate::detail::model_digest(model)) known = candidate;
    const auto r = known ? depthgate::solve_conformity_mip(*known, options, resume ? &*resume : nullptr)
                         : depthgate::solve_mip(model, options, resume ? &*resume : nullptr);

    std::cout << "status " << depthgate::to_string(r.status) << "\n";
    std::cout << "bound " << (r.bound ? r.bound->str() : "none") << "\n";
    std::cout << "incumbent " << (r.incumbent_value ? r.incumbent_value->str() : "none") << "\n";
    std::cout << "nodes " << r.nodes << " (total " << r.state.nodes << ", open " << r.state.open.size() << ")\n";
    if (known && r.incumbent_value) std::cout << "incumbent verified: relu outputs exact, conforming, objective = phi\n";
    if (r.status == depthgate::MipStatus::Infeasible && r.farkas.size() > 0) {
      std::cout << "farkas";
      for (const auto& v : r.farkas) std::cout << " " << v.str();
      std::cout << "\n";
    }
    if (r.incumbent_value) {
      std::cout << "solution";
      for (std::size_t j = 0; j < model.variables.size(); ++j)
        if (!r.incumbent[j].is_zero()) std::cout << " " << model.variables[j].name << "=" << r.incumbent[j].str();
      std::cout << "\n";
    }
    const std::string ckpt = checkpoint_file.empty() ? resume_file : checkpoint_file;
    if (!ckpt.empty()) {
      write_file(ckpt, depthgate::to_json(r.state).dump() + "\n");
      std::cout << "checkpoint " << ckpt << "\n";
    }
  });

  auto* mip_table = mip->add_subcommand("table", "Basis functions on the rays, and phi");
  mip_table->callback([&] { std::cout << table_text(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const FileParseError& e) {
    std::cerr << e.file << ":" << e.line() << ":" << e.column() << ": error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
    std::cerr << "\n";
    return 1;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
