#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cpwlkit/depthgate/mip.hpp"
#include "cpwlkit/error.hpp"
#include "cpwlkit/linalg/json.hpp"
#include "cpwlkit/linalg/simplex.hpp"

namespace cpwlkit::depthgate {

enum class MipStatus : std::uint8_t { Optimal, BudgetExhausted, Infeasible, Unbounded };

inline const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal:
      return "optimal";
    case MipStatus::BudgetExhausted:
      return "budget_exhausted";
    case MipStatus::Infeasible:
      return "infeasible";
    case MipStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

enum class BranchRule : std::uint8_t { MostFractional, FirstFractional };
enum class NodeOrder : std::uint8_t { BestBound, DepthFirst };

struct OpenNode {
  Rational bound;  // LP value of the parent, in maximization form
  std::vector<std::pair<std::size_t, int>> fixings;
  std::size_t depth = 0;
  std::uint64_t seq = 0;
};

struct SessionRecord {
  std::uint64_t nodes = 0;
  std::uint64_t total_nodes = 0;
  std::optional<Rational> bound;
  std::optional<Rational> incumbent;
};

/// Everything needed to continue a search: serialized as the checkpoint.
struct BnbState {
  std::string model_digest;
  std::uint64_t nodes = 0;
  std::uint64_t next_seq = 0;
  std::optional<Rational> incumbent_value;  // maximization form
  RatVector incumbent;
  std::vector<OpenNode> open;
  std::vector<SessionRecord> sessions;
};

struct NodeEvent {
  std::uint64_t node = 0;  // total evaluated nodes, across sessions
  Rational bound;          // global upper bound after this node
  std::optional<Rational> incumbent;
  std::size_t open = 0;
};

struct MipOptions {
  std::uint64_t node_budget = 10'000'000;
  BranchRule branch = BranchRule::MostFractional;
  NodeOrder order = NodeOrder::BestBound;
  linalg::PivotRule pivot = linalg::PivotRule::Bland;
  bool rounding_heuristic = true;
  std::function<void(const NodeEvent&)> on_node;
};

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  std::optional<Rational> bound;             // in the model's sense
  std::optional<Rational> incumbent_value;   // in the model's sense
  RatVector incumbent;
  std::uint64_t nodes = 0;                   // evaluated in this session
  RatVector farkas;                          // root LP certificate when infeasible
  BnbState state;
};

namespace detail {

inline std::string model_digest(const MipModel& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  feed(m.maximize ? "max" : "min");
  for (const auto& v : m.variables) {
    feed(v.name);
    feed(v.kind == VarKind::Binary ? "B" : "C");
    feed(v.lower ? v.lower->str() : "-inf");
    feed(v.upper ? v.upper->str() : "+inf");
  }
  // Terms merged and ordered by column so equal models hash equally.
  auto feed_terms = [&](const LinearTerms& terms) {
    std::map<std::size_t, Rational> merged;
    for (const auto& [j, c] : terms) merged[j] += c;
    for (const auto& [j, c] : merged)
      if (!c.is_zero()) feed(std::to_string(j) + ":" + c.str());
  };
  for (const auto& r : m.constraints) {
    feed(r.name);
    feed_terms(r.terms);
    feed(std::to_string(static_cast<int>(r.sense)) + r.rhs.str());
  }
  feed_terms(m.objective);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (int k = 60; k >= 0; k -= 4) out += hex[(h >> k) & 0xf];
  return out;
}

inline Rational to_model_sense(const MipModel& m, const Rational& v) { return m.maximize ? v : -v; }

}  // namespace detail

/// Exact LP-based branch-and-bound. Every node re-optimizes the shared
/// simplex engine with the dual simplex after changing binary bounds. The
/// global bound is max(incumbent, best open bound); with best-bound order it
/// never increases.
inline MipResult solve_mip(const MipModel& model, const MipOptions& options = {}, const BnbState* resume = nullptr) {
  using linalg::LpStatus;
  const linalg::LpProblem lp = model.relaxation();
  std::vector<std::size_t> binaries;
  for (std::size_t j = 0; j < model.variables.size(); ++j)
    if (model.variables[j].kind == VarKind::Binary) binaries.push_back(j);

  MipResult result;
  BnbState& st = result.state;
  if (resume) {
    st = *resume;
    require(st.model_digest == detail::model_digest(model), "solve_mip: checkpoint belongs to a different model");
    if (st.incumbent_value)
      require(model.is_feasible(st.incumbent) && model.objective_value(st.incumbent) ==
                                                     detail::to_model_sense(model, *st.incumbent_value),
              "solve_mip: checkpoint incumbent is not a feasible solution");
    for (const auto& n : st.open)
      for (const auto& [j, v] : n.fixings)
        require(j < model.variables.size() && model.variables[j].kind == VarKind::Binary,
                "solve_mip: checkpoint fixes a variable that is not binary");
  } else {
    st.model_digest = detail::model_digest(model);
  }

  linalg::SimplexEngine engine(lp, options.pivot);
  const auto root = engine.solve();
  if (root.status == LpStatus::Infeasible) {
    result.status = MipStatus::Infeasible;
    result.farkas = root.farkas;
    st.open.clear();
    return result;
  }
  if (root.status == LpStatus::Unbounded) {
    result.status = MipStatus::Unbounded;
    st.open.clear();
    return result;
  }

  // Current bound state of every binary: -1 relaxed, else the fixed value.
  std::vector<int> fixed(model.variables.size(), -1);
  auto apply = [&](const std::vector<std::pair<std::size_t, int>>& fixings) {
    std::vector<int> want(model.variables.size(), -1);
    for (const auto& [j, v] : fixings) want[j] = v;
    for (std::size_t j : binaries) {
      if (want[j] == fixed[j]) continue;
      if (want[j] < 0)
        engine.set_bounds(j, Rational(0), Rational(1));
      else
        engine.set_bounds(j, Rational(want[j]), Rational(want[j]));
      fixed[j] = want[j];
    }
    return engine.dual_simplex();
  };
  auto fractional = [&](const RatVector& x) {
    std::optional<std::size_t> pick;
    Rational best_gap;
    const Rational half(1, 2);
    for (std::size_t j : binaries) {
      if (x[j].is_integer()) continue;
      if (options.branch == BranchRule::FirstFractional) return std::optional<std::size_t>(j);
      const Rational gap = abs(x[j] - half);
      if (!pick || gap < best_gap) {
        pick = j;
        best_gap = gap;
      }
    }
    return pick;
  };
  auto offer = [&](const RatVector& x, const Rational& value) {
    if (st.incumbent_value && value <= *st.incumbent_value) return;
    require(model.is_feasible(x), "solve_mip: integral LP point fails the model (internal error)");
    st.incumbent_value = value;
    st.incumbent = x;
  };

  if (!resume) {
    if (options.rounding_heuristic) {
      // Rounded root point, then every binary at zero.
      std::vector<std::pair<std::size_t, int>> rounded, zeros;
      for (std::size_t j : binaries) {
        rounded.emplace_back(j, root.x[j] >= Rational(1, 2) ? 1 : 0);
        zeros.emplace_back(j, 0);
      }
      for (const auto& fix : {rounded, zeros})
        if (apply(fix) == LpStatus::Optimal) offer(engine.structural_values(), engine.objective_value());
    }
    st.open.push_back({root.value, {}, 0, st.next_seq++});
  }

  auto worse = [&](const OpenNode& a, const OpenNode& b) {
    if (options.order == NodeOrder::BestBound && a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq < b.seq;
  };
  std::priority_queue<OpenNode, std::vector<OpenNode>, decltype(worse)> queue(worse);
  std::multiset<Rational> bounds;
  for (auto& n : st.open) {
    bounds.insert(n.bound);
    queue.push(std::move(n));
  }
  st.open.clear();

  auto global_bound = [&]() -> std::optional<Rational> {
    std::optional<Rational> b = st.incumbent_value;
    if (!bounds.empty() && (!b || *bounds.rbegin() > *b)) b = *bounds.rbegin();
    return b;
  };

  std::uint64_t session_nodes = 0;
  while (!queue.empty() && session_nodes < options.node_budget) {
    OpenNode node = queue.top();
    queue.pop();
    bounds.erase(bounds.find(node.bound));
    if (st.incumbent_value && node.bound <= *st.incumbent_value) continue;

    ++session_nodes;
    ++st.nodes;
    if (apply(node.fixings) == LpStatus::Optimal) {
      const Rational value = engine.objective_value();
      if (!st.incumbent_value || value > *st.incumbent_value) {
        const RatVector x = engine.structural_values();
        if (const auto j = fractional(x)) {
          for (int v : {0, 1}) {
            OpenNode child{value, node.fixings, node.depth + 1, st.next_seq++};
            child.fixings.emplace_back(*j, v);
            bounds.insert(child.bound);
            queue.push(std::move(child));
          }
        } else {
          offer(x, value);
        }
      }
    }
    if (options.on_node) options.on_node({st.nodes, global_bound().value_or(Rational()), st.incumbent_value, queue.size()});
  }

  result.nodes = session_nodes;
  while (!queue.empty()) {
    st.open.push_back(queue.top());
    queue.pop();
  }
  // Drop open nodes the incumbent already dominates.
  std::erase_if(st.open, [&](const OpenNode& n) { return st.incumbent_value && n.bound <= *st.incumbent_value; });

  const auto bound = global_bound();
  if (st.open.empty())
    result.status = st.incumbent_value ? MipStatus::Optimal : MipStatus::Infeasible;
  else
    result.status = MipStatus::BudgetExhausted;
  if (bound) result.bound = detail::to_model_sense(model, *bound);
  if (st.incumbent_value) {
    result.incumbent_value = detail::to_model_sense(model, *st.incumbent_value);
    result.incumbent = st.incumbent;
  }
  st.sessions.push_back({session_nodes, st.nodes, result.bound, result.incumbent_value});
  return result;
}

// Checkpoint JSON.

inline nlohmann::json to_json(const BnbState& st) {
  nlohmann::json j;
  j["format"] = "cpwlkit-bnb-1";
  j["model_digest"] = st.model_digest;
  j["nodes"] = st.nodes;
  j["next_seq"] = st.next_seq;
  if (st.incumbent_value)
    j["incumbent"] = {{"value", st.incumbent_value->str()}, {"x", st.incumbent}};
  else
    j["incumbent"] = nullptr;
  j["open"] = nlohmann::json::array();
  for (const auto& n : st.open) {
    nlohmann::json fix = nlohmann::json::array();
    for (const auto& [var, v] : n.fixings) fix.push_back({var, v});
    j["open"].push_back({{"bound", n.bound.str()}, {"depth", n.depth}, {"seq", n.seq}, {"fix", fix}});
  }
  j["sessions"] = nlohmann::json::array();
  for (const auto& s : st.sessions) {
    nlohmann::json r = {{"nodes", s.nodes}, {"total_nodes", s.total_nodes}};
    r["bound"] = s.bound ? nlohmann::json(s.bound->str()) : nlohmann::json(nullptr);
    r["incumbent"] = s.incumbent ? nlohmann::json(s.incumbent->str()) : nlohmann::json(nullptr);
    j["sessions"].push_back(std::move(r));
  }
  return j;
}

inline BnbState bnb_state_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "cpwlkit-bnb-1") throw ParseError("unknown checkpoint format", 0, 0);
    BnbState st;
    st.model_digest = j.at("model_digest").get<std::string>();
    st.nodes = j.at("nodes").get<std::uint64_t>();
    st.next_seq = j.at("next_seq").get<std::uint64_t>();
    if (!j.at("incumbent").is_null()) {
      st.incumbent_value = j.at("incumbent").at("value").get<Rational>();
      st.incumbent = j.at("incumbent").at("x").get<RatVector>();
    }
    for (const auto& n : j.at("open")) {
      OpenNode node{n.at("bound").get<Rational>(), {}, n.at("depth").get<std::size_t>(), n.at("seq").get<std::uint64_t>()};
      for (const auto& f : n.at("fix")) {
        const int v = f.at(1).get<int>();
        if (v != 0 && v != 1) throw ParseError("fixing value must be 0 or 1", 0, 0);
        node.fixings.emplace_back(f.at(0).get<std::size_t>(), v);
      }
      st.open.push_back(std::move(node));
    }
    for (const auto& s : j.at("sessions")) {
      SessionRecord r{s.at("nodes").get<std::uint64_t>(), s.at("total_nodes").get<std::uint64_t>(), {}, {}};
      if (!s.at("bound").is_null()) r.bound = s.at("bound").get<Rational>();
      if (!s.at("incumbent").is_null()) r.incumbent = s.at("incumbent").get<Rational>();
      st.sessions.push_back(r);
    }
    return st;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what(), 0, 0);
  }
}

}  // namespace cpwlkit::depthgate
