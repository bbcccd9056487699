#include "bayan/network.hpp"

#include <algorithm>
#include <set>

namespace bayan {

Rational SignalDistribution::ratio(int s) const {
  if (s < 0 || s >= alphabet_size())
    throw BuildError("signal value out of alphabet");
  if (probs_false[s] == 0)
    throw BuildError("likelihood ratio undefined: probs_false is zero");
  return Rational(probs_true[s] / probs_false[s]);
}

bool SignalDistribution::informative() const {
  return probs_true != probs_false;
}

std::string SignalDistribution::validate() const {
  if (probs_true.size() < 2) return "alphabet size must be at least 2";
  if (probs_true.size() != probs_false.size()) return "alphabet size mismatch";
  Rational sum_t(0), sum_f(0);
  for (std::size_t s = 0; s < probs_true.size(); ++s) {
    for (const Rational* p : {&probs_true[s], &probs_false[s]}) {
      if (*p < 0 || *p > 1) return "probability outside [0, 1]";
    }
    sum_t += probs_true[s];
    sum_f += probs_false[s];
  }
  if (sum_t != 1) return "probs_true does not sum to 1";
  if (sum_f != 1) return "probs_false does not sum to 1";
  return "";
}

SignalDistribution SignalDistribution::binary(const Rational& p_true, const Rational& p_false) {
  SignalDistribution d;
  d.probs_true = {Rational(1 - p_true), p_true};
  d.probs_false = {Rational(1 - p_false), p_false};
  std::string err = d.validate();
  if (!err.empty()) throw BuildError("bad binary distribution: " + err);
  return d;
}

SignalDistribution SignalDistribution::ternary(std::vector<Rational> p_true,
                                               std::vector<Rational> p_false) {
  SignalDistribution d;
  d.probs_true = std::move(p_true);
  d.probs_false = std::move(p_false);
  if (d.alphabet_size() != 3) throw BuildError("ternary distribution needs 3 entries");
  std::string err = d.validate();
  if (!err.empty()) throw BuildError("bad ternary distribution: " + err);
  return d;
}

bool SignalDistribution::operator<(const SignalDistribution& other) const {
  if (probs_true != other.probs_true)
    return std::lexicographical_compare(probs_true.begin(), probs_true.end(),
                                        other.probs_true.begin(), other.probs_true.end());
  return std::lexicographical_compare(probs_false.begin(), probs_false.end(),
                                      other.probs_false.begin(), other.probs_false.end());
}

int Network::add_agent(Agent a) {
  if (index_.count(a.id)) throw BuildError("duplicate agent id '" + a.id + "'");
  if (a.signal) {
    std::string err = a.signal->validate();
    if (!err.empty()) throw BuildError("agent '" + a.id + "': " + err);
  }
  int idx = static_cast<int>(agents.size());
  index_[a.id] = idx;
  agents.push_back(std::move(a));
  return idx;
}

void Network::add_edge(const std::string& observer, const std::string& observed) {
  add_edge_idx(require(observer), require(observed));
}

void Network::add_edge_idx(int observer, int observed) {
  if (observer == observed) throw BuildError("self-loop at '" + agents[observer].id + "'");
  for (const auto& e : edges)
    if (e.first == observer && e.second == observed)
      throw BuildError("duplicate edge " + agents[observer].id + " -> " + agents[observed].id);
  edges.emplace_back(observer, observed);
}

int Network::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

int Network::require(const std::string& id) const {
  int idx = index_of(id);
  if (idx < 0) throw BuildError("unknown agent id '" + id + "'");
  return idx;
}

std::vector<std::vector<int>> Network::out_neighbors() const {
  std::vector<std::vector<int>> out(agents.size());
  for (const auto& e : edges) out[e.first].push_back(e.second);
  return out;
}

std::vector<int> Network::in_degrees() const {
  std::vector<int> deg(agents.size(), 0);
  for (const auto& e : edges) deg[e.second]++;
  return deg;
}

namespace {

// Topological order; empty optional when the graph has a cycle.
std::optional<std::vector<int>> topo_order(const Network& net) {
  auto nbrs = net.out_neighbors();
  std::vector<int> state(net.agents.size(), 0), order;
  std::vector<int> stack;
  for (std::size_t root = 0; root < net.agents.size(); ++root) {
    if (state[root]) continue;
    stack.push_back(static_cast<int>(root));
    while (!stack.empty()) {
      int u = stack.back();
      if (state[u] == 0) {
        state[u] = 1;
        for (int v : nbrs[u]) {
          if (state[v] == 1) return std::nullopt;  // back edge
          if (state[v] == 0) stack.push_back(v);
        }
      } else {
        stack.pop_back();
        if (state[u] == 1) {
          state[u] = 2;
          order.push_back(u);
        }
      }
    }
  }
  return order;  // sinks first
}

}  // namespace

std::vector<std::optional<int>> significant_times(const Network& net) {
  std::vector<std::optional<int>> t(net.agents.size());
  auto order = topo_order(net);
  if (!order) return t;
  auto nbrs = net.out_neighbors();
  for (int u : *order) {
    if (net.agents[u].signal && net.agents[u].signal->informative()) {
      t[u] = 0;
      continue;
    }
    if (nbrs[u].empty()) {
      t[u] = 0;  // an isolated relay never learns anything
      continue;
    }
    std::optional<int> val;
    bool consistent = true;
    for (int v : nbrs[u]) {
      if (!t[v]) {
        consistent = false;
        break;
      }
      int cand = *t[v] + 1;
      if (val && *val != cand) {
        consistent = false;
        break;
      }
      val = cand;
    }
    if (consistent) t[u] = val;
  }
  return t;
}

std::vector<std::string> validate_structured(const Network& net) {
  std::vector<std::string> violations;
  auto order = topo_order(net);
  if (!order) {
    violations.push_back("cycle: graph is not a DAG");
    return violations;
  }
  auto nbrs = net.out_neighbors();
  auto indeg = net.in_degrees();

  for (std::size_t u = 0; u < net.agents.size(); ++u) {
    const Agent& a = net.agents[u];
    bool informative = a.signal && a.signal->informative();
    if (informative && !nbrs[u].empty())
      violations.push_back("informative agent '" + a.id + "' has out-degree > 0");
    if (indeg[u] == 0) {
      bool is_observer =
          net.designated_observer && *net.designated_observer == a.id;
      if (!is_observer && !(nbrs[u].empty() && net.agents.size() == 1))
        violations.push_back("agent '" + a.id + "' has in-degree 0 but is not the designated observer");
    }
  }

  auto times = significant_times(net);
  for (std::size_t u = 0; u < net.agents.size(); ++u) {
    const Agent& a = net.agents[u];
    if (!times[u]) {
      violations.push_back("agent '" + a.id + "' has no unique path-length significant time");
      continue;
    }
    bool informative = a.signal && a.signal->informative();
    if (informative && *times[u] != 0)
      violations.push_back("informative agent '" + a.id + "' must have significant time 0");
    if (a.significant_time && *a.significant_time != *times[u])
      violations.push_back("agent '" + a.id + "' declares significant time " +
                           std::to_string(*a.significant_time) + " but structure gives " +
                           std::to_string(*times[u]));
    // Every observed agent must sit exactly one step earlier; otherwise the
    // agent would learn at several distinct times.
    if (!informative) {
      for (int v : nbrs[u])
        if (times[v] && *times[v] != *times[u] - 1)
          violations.push_back("agent '" + a.id + "' observes '" + net.agents[v].id +
                               "' across a significant-time gap");
    }
  }
  return violations;
}

mpz_class world_state_count(const Network& net) {
  mpz_class count = 2;
  for (const Agent& a : net.agents)
    if (a.signal) count *= a.signal->alphabet_size();
  return count;
}

WorldTable enumerate_world_states(const Network& net, std::uint64_t cap) {
  if (world_state_count(net) > cap)
    throw CapExceeded("state space exceeds cap; use analytic calculator instead");

  std::vector<int> informative;  // agents carrying signals, in insertion order
  for (std::size_t i = 0; i < net.agents.size(); ++i)
    if (net.agents[i].signal) informative.push_back(static_cast<int>(i));

  WorldTable table;
  Rational half = rat(1, 2);
  for (int theta = 1; theta >= 0; --theta) {
    // Depth-first product over signal values, skipping zero-probability
    // branches so every stored state has weight > 0.
    std::vector<int> values(informative.size(), 0);
    std::vector<Rational> prefix(informative.size() + 1);
    prefix[0] = half;
    std::size_t depth = 0;
    while (true) {
      if (depth == informative.size()) {
        WorldState ws;
        ws.theta_true = theta == 1;
        ws.signals.assign(net.agents.size(), -1);
        for (std::size_t k = 0; k < informative.size(); ++k)
          ws.signals[informative[k]] = values[k];
        table.states.push_back(std::move(ws));
        table.weights.push_back(prefix[informative.size()]);
        if (informative.empty()) break;
        depth--;
        values[depth]++;
        continue;
      }
      const SignalDistribution& d = *net.agents[informative[depth]].signal;
      if (values[depth] >= d.alphabet_size()) {
        if (depth == 0) break;
        depth--;
        values[depth]++;
        continue;
      }
      const Rational& p = theta ? d.probs_true[values[depth]] : d.probs_false[values[depth]];
      if (p == 0) {
        values[depth]++;
        continue;
      }
      prefix[depth + 1] = prefix[depth] * p;
      depth++;
      if (depth < informative.size()) values[depth] = 0;
    }
  }
  return table;
}

}  // namespace bayan
