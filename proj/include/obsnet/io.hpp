#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "obsnet/assignment.hpp"
#include "obsnet/cyber.hpp"
#include "obsnet/digraph.hpp"
#include "obsnet/errors.hpp"
#include "obsnet/measurement.hpp"
#include "obsnet/observability.hpp"
#include "obsnet/simulation.hpp"
#include "obsnet/spanning.hpp"

namespace obsnet {

namespace detail {

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ParseError("failed writing " + path);
}

// Shortest round-trip decimal form, so serialized doubles reload bit-exactly.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec <= 16; ++prec) {
      char probe[32];
      std::snprintf(probe, sizeof probe, "%.*g", prec, v);
      if (std::strtod(probe, nullptr) == v) return probe;
    }
  }
  return buf;
}

inline int require_int(const nlohmann::json& j, const char* field, const std::string& path) {
  if (!j.contains(field) || !j[field].is_number_integer())
    throw ParseError(path + ": missing integer field \"" + field + "\"");
  return j[field].get<int>();
}

inline std::vector<std::pair<int, int>> parse_pairs(const nlohmann::json& arr,
                                                    const std::string& what,
                                                    const std::string& path) {
  if (!arr.is_array()) throw ParseError(path + ": \"" + what + "\" must be an array of pairs");
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError(path + ": " + what + "[" + std::to_string(i) + "] must be a pair of integers");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

inline std::vector<std::vector<double>> parse_matrix(const nlohmann::json& arr,
                                                     const std::string& path) {
  if (!arr.is_array() || arr.empty())
    throw ParseError(path + ": expected a nonempty 2-D array of costs");
  std::vector<std::vector<double>> m;
  for (size_t i = 0; i < arr.size(); ++i) {
    const auto& row = arr[i];
    if (!row.is_array() || row.empty())
      throw ParseError(path + ": row " + std::to_string(i + 1) + " must be a nonempty array");
    std::vector<double> r;
    for (size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number())
        throw ParseError(path + ": entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") is not a number");
      r.push_back(row[j].get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace detail

// ---- interaction graph: {"n": int, "edges": [[u,v], ...]} ----

inline SocialDigraph load_digraph(const std::string& path) {
  auto j = detail::read_json(path);
  int n = detail::require_int(j, "n", path);
  std::vector<std::pair<int, int>> edges;
  if (j.contains("edges")) edges = detail::parse_pairs(j["edges"], "edges", path);
  return SocialDigraph(n, std::move(edges));
}

inline void save_digraph(const SocialDigraph& g, const std::string& path) {
  nlohmann::json j;
  j["n"] = g.n();
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.edges()) j["edges"].push_back({u, v});
  detail::write_text(path, j.dump(2) + "\n");
}

// ---- placement: {"agents": N, "assign": {"1": state, ...}} ----

inline MeasurementStructure load_measurement(const std::string& path) {
  auto j = detail::read_json(path);
  int N = detail::require_int(j, "agents", path);
  if (N < 0) throw ParseError(path + ": agent count must be nonnegative");
  if (!j.contains("assign") || !j["assign"].is_object())
    throw ParseError(path + ": missing object field \"assign\"");
  std::vector<int> states(N, 0);
  std::vector<bool> seen(N + 1, false);
  for (auto& [key, val] : j["assign"].items()) {
    int agent;
    try {
      size_t pos = 0;
      agent = std::stoi(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError(path + ": assign key \"" + key + "\" is not an agent index");
    }
    if (agent < 1 || agent > N)
      throw ParseError(path + ": agent " + key + " out of range for " + std::to_string(N) +
                       " agents");
    if (seen[agent]) throw ParseError(path + ": agent " + key + " assigned twice");
    seen[agent] = true;
    if (!val.is_number_integer())
      throw ParseError(path + ": assign[\"" + key + "\"] must be a state index");
    states[agent - 1] = val.get<int>();
  }
  for (int i = 1; i <= N; ++i)
    if (!seen[i]) throw ParseError(path + ": agent " + std::to_string(i) + " has no assignment");
  try {
    return MeasurementStructure(std::move(states));
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Optional extras let the placement file double as the sensing result.
inline void save_measurement(const MeasurementStructure& h, const std::string& path,
                             const std::vector<AgentType>* types = nullptr,
                             const double* total_cost = nullptr) {
  nlohmann::json j;
  j["agents"] = h.num_agents();
  nlohmann::json assign = nlohmann::json::object();
  for (int i = 1; i <= h.num_agents(); ++i) assign[std::to_string(i)] = h.state_of(i);
  j["assign"] = assign;
  if (types) {
    nlohmann::json t = nlohmann::json::object();
    for (int i = 1; i <= h.num_agents(); ++i) t[std::to_string(i)] = to_string((*types)[i - 1]);
    j["types"] = t;
  }
  if (total_cost) j["total_cost"] = *total_cost;
  detail::write_text(path, j.dump(2) + "\n");
}

// ---- cyber network: {"agents": N, "alpha": [[j,i],...], "beta": [[j,i],...],
//      "beta_weights": [[...]] (optional)} ----

inline CyberNetwork load_cyber_network(const std::string& path) {
  auto j = detail::read_json(path);
  CyberNetwork net;
  net.num_agents = detail::require_int(j, "agents", path);
  if (j.contains("alpha")) net.alpha_edges = detail::parse_pairs(j["alpha"], "alpha", path);
  if (j.contains("beta")) net.beta_edges = detail::parse_pairs(j["beta"], "beta", path);
  if (j.contains("beta_weights")) {
    for (auto& row : detail::parse_matrix(j["beta_weights"], path))
      net.beta_weights.push_back(std::move(row));
  }
  try {
    net.validate();
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return net;
}

inline void save_cyber_network(const CyberNetwork& net, const std::string& path) {
  nlohmann::json j;
  j["agents"] = net.num_agents;
  j["alpha"] = nlohmann::json::array();
  for (auto [a, b] : net.alpha_edges) j["alpha"].push_back({a, b});
  j["beta"] = nlohmann::json::array();
  for (auto [a, b] : net.beta_edges) j["beta"].push_back({a, b});
  if (!net.beta_weights.empty()) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& row : net.beta_weights) {
      nlohmann::json r = nlohmann::json::array();
      // Raw-text doubles keep the row-stochastic sums bit-stable round trip.
      for (double x : row) r.push_back(nlohmann::json::parse(detail::fmt_double(x)));
      w.push_back(r);
    }
    j["beta_weights"] = w;
  }
  detail::write_text(path, j.dump(2) + "\n");
}

// ---- cost matrices: either a bare 2-D array or {"costs": ...,
//      "available": [[bool]] (optional, network costs only)} ----

inline SensingCostMatrix load_sensing_costs(const std::string& path) {
  auto j = detail::read_json(path);
  SensingCostMatrix c;
  c.costs = detail::parse_matrix(j.is_object() && j.contains("costs") ? j["costs"] : j, path);
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return c;
}

inline NetworkCostMatrix load_network_costs(const std::string& path) {
  auto j = detail::read_json(path);
  auto costs = detail::parse_matrix(j.is_object() && j.contains("costs") ? j["costs"] : j, path);
  NetworkCostMatrix b = NetworkCostMatrix::full(std::move(costs));
  if (j.is_object() && j.contains("available")) {
    const auto& av = j["available"];
    if (!av.is_array() || av.size() != b.costs.size())
      throw ParseError(path + ": \"available\" must be a square boolean matrix");
    for (size_t i = 0; i < av.size(); ++i) {
      if (!av[i].is_array() || av[i].size() != b.costs.size())
        throw ParseError(path + ": \"available\" must be a square boolean matrix");
      for (size_t k = 0; k < av[i].size(); ++k) {
        if (!av[i][k].is_boolean())
          throw ParseError(path + ": available entries must be booleans");
        b.available[i][k] = av[i][k].get<bool>() && i != k;
      }
    }
  }
  return b;
}

// ---- link selection: {"edges": [[i,j],...], "total_cost": x} ----

inline LinkSelection load_links(const std::string& path) {
  auto j = detail::read_json(path);
  LinkSelection sel;
  if (!j.contains("edges")) throw ParseError(path + ": missing field \"edges\"");
  sel.edges = detail::parse_pairs(j["edges"], "edges", path);
  if (j.contains("total_cost")) {
    if (!j["total_cost"].is_number()) throw ParseError(path + ": total_cost must be a number");
    sel.total_cost = j["total_cost"].get<double>();
  }
  sel.connected = true;
  return sel;
}

inline void save_links(const LinkSelection& sel, const std::string& path) {
  nlohmann::json j;
  j["edges"] = nlohmann::json::array();
  for (auto [a, b] : sel.edges) j["edges"].push_back({a, b});
  j["total_cost"] = nlohmann::json::parse(detail::fmt_double(sel.total_cost));
  detail::write_text(path, j.dump(2) + "\n");
}

// ---- structural report ----

inline void save_report(const ObservabilityReport& r, const std::string& path) {
  nlohmann::json j;
  j["s_rank"] = r.s_rank;
  j["contractions"] = nlohmann::json::array();
  for (const auto& c : r.contractions.contractions) j["contractions"].push_back(c.nodes);
  j["sccs"] = r.sccs.components;
  j["parents"] = r.sccs.parent_components();
  j["accessible"] = r.accessible;
  j["rank_ok"] = r.rank_ok;
  j["observable"] = r.observable;
  j["n_min"] = r.n_min;
  detail::write_text(path, j.dump(2) + "\n");
}

// ---- MSEE traces: header then one row per step ----

inline void write_msee_csv(const SimulationResult& r, const std::string& path) {
  std::string text = "k";
  for (size_t i = 1; i <= r.msee.size(); ++i) text += ",msee_agent_" + std::to_string(i);
  if (!r.centralized_msee.empty()) text += ",msee_centralized";
  text += "\n";
  for (int k = 1; k <= r.horizon; ++k) {
    text += std::to_string(k);
    for (const auto& series : r.msee) text += "," + detail::fmt_double(series[k - 1]);
    if (!r.centralized_msee.empty()) text += "," + detail::fmt_double(r.centralized_msee[k - 1]);
    text += "\n";
  }
  detail::write_text(path, text);
}

}  // namespace obsnet
