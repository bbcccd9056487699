#include "bayan/engine.hpp"

#include <unordered_map>

namespace bayan {

Rational odds_from_mu(const Rational& mu) {
  if (mu == 1) throw BuildError("cannot express certainty belief as an odds ratio");
  return Rational(mu / (1 - mu));
}

Rational mu_from_odds(const Rational& odds) {
  if (odds < 0) throw BuildError("negative odds ratio");
  return Rational(odds / (1 + odds));
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int32_t x : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

Engine::Engine(const Network& net, Model model, int horizon, std::uint64_t cap)
    : net_(&net), model_(model), horizon_(horizon) {
  if (horizon < 0) throw BuildError("negative horizon");
  worlds_ = enumerate_world_states(net, cap);
  nbrs_ = net.out_neighbors();
  run();
}

void Engine::run() {
  const std::size_t n = worlds_.states.size();
  const std::size_t na = net_->agents.size();

  // t = 0: partition by own signal (single cell without one).
  std::vector<std::vector<std::int32_t>> group(na, std::vector<std::int32_t>(n, 0));
  std::vector<std::int32_t> group_count(na, 1);
  for (std::size_t u = 0; u < na; ++u) {
    if (!net_->agents[u].signal) continue;
    std::vector<std::int32_t> remap(net_->agents[u].signal->alphabet_size(), -1);
    std::int32_t next = 0;
    for (std::size_t w = 0; w < n; ++w) {
      int value = worlds_.states[w].signals[u];
      if (remap[value] < 0) remap[value] = next++;
      group[u][w] = remap[value];
    }
    group_count[u] = next;
  }

  groups_.resize(horizon_ + 1);
  group_mu_.resize(horizon_ + 1);
  group_act_.resize(horizon_ + 1);

  // Broadcast value id per (agent, state) for the current round; in the
  // binary model this is the action bit, in the revealed-belief model an
  // id shared by all states broadcasting the same exact posterior.
  std::vector<std::vector<std::int32_t>> value_id(na);
  std::vector<bool> changed(na, true);

  for (int t = 0; t <= horizon_; ++t) {
    group_mu_[t].resize(na);
    group_act_[t].resize(na);
    for (std::size_t u = 0; u < na; ++u) {
      std::vector<Rational> wt(group_count[u], Rational(0));
      std::vector<Rational> wf(group_count[u], Rational(0));
      for (std::size_t w = 0; w < n; ++w) {
        if (worlds_.states[w].theta_true)
          wt[group[u][w]] += worlds_.weights[w];
        else
          wf[group[u][w]] += worlds_.weights[w];
      }
      auto& mus = group_mu_[t][u];
      auto& acts = group_act_[t][u];
      mus.resize(group_count[u]);
      acts.resize(group_count[u]);
      for (std::int32_t g = 0; g < group_count[u]; ++g) {
        Rational total = wt[g] + wf[g];
        if (total == 0) throw BuildError("empty information set");  // unreachable
        mus[g] = wt[g] / total;
        acts[g] = wt[g] > wf[g] ? 1 : 0;  // ties resolve to F
      }
    }
    groups_[t] = group;

    if (t == horizon_) break;

    // Broadcast values for round t.
    for (std::size_t u = 0; u < na; ++u) {
      std::vector<std::int32_t> ids(group_count[u]);
      if (model_ == Model::BinaryAction) {
        for (std::int32_t g = 0; g < group_count[u]; ++g)
          ids[g] = group_act_[t][u][g];
      } else {
        // Distinct groups broadcasting equal posteriors must collide.
        std::map<Rational, std::int32_t> intern;
        for (std::int32_t g = 0; g < group_count[u]; ++g) {
          auto [it, fresh] = intern.emplace(group_mu_[t][u][g],
                                            static_cast<std::int32_t>(intern.size()));
          ids[g] = it->second;
        }
      }
      std::vector<std::int32_t> vid(n);
      for (std::size_t w = 0; w < n; ++w) vid[w] = ids[group[u][w]];
      bool same = t > 0 && vid == value_id[u];
      changed[u] = !same;
      value_id[u] = std::move(vid);
    }

    // Refine each agent on its neighbors' round-t broadcasts.
    for (std::size_t u = 0; u < na; ++u) {
      if (nbrs_[u].empty()) continue;
      bool any = false;
      for (int v : nbrs_[u]) any = any || changed[v];
      if (!any && t > 0) continue;  // broadcasts identical to last round

      std::unordered_map<std::vector<std::int32_t>, std::int32_t, VecHash> sig_map;
      std::vector<std::int32_t> next_group(n);
      std::vector<std::int32_t> sig(nbrs_[u].size() + 1);
      for (std::size_t w = 0; w < n; ++w) {
        sig[0] = group[u][w];
        for (std::size_t k = 0; k < nbrs_[u].size(); ++k)
          sig[k + 1] = value_id[nbrs_[u][k]][w];
        auto [it, fresh] = sig_map.emplace(sig, static_cast<std::int32_t>(sig_map.size()));
        next_group[w] = it->second;
      }
      group[u] = std::move(next_group);
      group_count[u] = static_cast<std::int32_t>(sig_map.size());
    }
  }
}

bool Engine::action(int agent, int t, std::size_t w) const {
  return group_act_[t][agent][groups_[t][agent][w]] != 0;
}

const Rational& Engine::belief(int agent, int t, std::size_t w) const {
  return group_mu_[t][agent][groups_[t][agent][w]];
}

std::vector<std::size_t> Engine::info_set(int agent, int t, std::size_t w) const {
  std::vector<std::size_t> out;
  std::int32_t g = groups_[t][agent][w];
  for (std::size_t x = 0; x < worlds_.states.size(); ++x)
    if (groups_[t][agent][x] == g) out.push_back(x);
  return out;
}

std::pair<Rational, Rational> Engine::info_weights(int agent, int t, std::size_t w) const {
  Rational wt(0), wf(0);
  std::int32_t g = groups_[t][agent][w];
  for (std::size_t x = 0; x < worlds_.states.size(); ++x) {
    if (groups_[t][agent][x] != g) continue;
    if (worlds_.states[x].theta_true)
      wt += worlds_.weights[x];
    else
      wf += worlds_.weights[x];
  }
  return {wt, wf};
}

ActionTrace Engine::trace_for(std::size_t w) const {
  ActionTrace trace;
  trace.model = model_;
  trace.horizon = horizon_;
  trace.agent_ids.reserve(net_->agents.size());
  for (const Agent& a : net_->agents) trace.agent_ids.push_back(a.id);
  trace.actions.resize(net_->agents.size());
  trace.beliefs.resize(net_->agents.size());
  for (std::size_t u = 0; u < net_->agents.size(); ++u) {
    for (int t = 0; t <= horizon_; ++t) {
      trace.actions[u].push_back(action(static_cast<int>(u), t, w));
      trace.beliefs[u].push_back(belief(static_cast<int>(u), t, w));
    }
  }
  return trace;
}

std::optional<std::size_t> Engine::find_state(const WorldState& ws) const {
  for (std::size_t w = 0; w < worlds_.states.size(); ++w) {
    const WorldState& cand = worlds_.states[w];
    if (cand.theta_true == ws.theta_true && cand.signals == ws.signals) return w;
  }
  return std::nullopt;
}

std::vector<std::size_t> Engine::consistent_states(const ObservationHistory& hist,
                                                   int time) const {
  int observer = net_->index_of(hist.observer_id);
  std::vector<bool> keep(worlds_.states.size(), true);

  if (hist.own_signal) {
    if (observer < 0) throw BuildError("history names unknown observer");
    for (std::size_t w = 0; w < worlds_.states.size(); ++w)
      keep[w] = keep[w] && worlds_.states[w].signals[observer] == *hist.own_signal;
  }

  auto check_entry = [&](const std::string& id, int t) {
    int v = net_->require(id);
    if (t >= time) throw BuildError("history entry at or after query time");
    if (t > horizon_) throw BuildError("history entry beyond engine horizon");
    if (observer >= 0) {
      bool neighbor = false;
      for (int x : nbrs_[observer]) neighbor = neighbor || x == v;
      if (!neighbor)
        throw BuildError("history entry for '" + id + "' which the observer does not observe");
    }
    return v;
  };

  for (const auto& [key, act] : hist.binary_entries) {
    int v = check_entry(key.first, key.second);
    for (std::size_t w = 0; w < worlds_.states.size(); ++w)
      keep[w] = keep[w] && action(v, key.second, w) == act;
  }
  for (const auto& [key, mu] : hist.belief_entries) {
    int v = check_entry(key.first, key.second);
    for (std::size_t w = 0; w < worlds_.states.size(); ++w)
      keep[w] = keep[w] && belief(v, key.second, w) == mu;
  }

  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < worlds_.states.size(); ++w)
    if (keep[w]) out.push_back(w);
  return out;
}

ActionTrace simulate(const Network& net, const WorldState& world, int horizon, Model model,
                     std::uint64_t cap) {
  Engine engine(net, model, horizon, cap);
  auto w = engine.find_state(world);
  if (!w) throw BuildError("world state not in the enumerated space (zero probability?)");
  return engine.trace_for(*w);
}

Rational posterior(const Network& net, const ObservationHistory& hist, int time, Model model,
                   std::uint64_t cap) {
  int horizon = time > 0 ? time - 1 : 0;
  Engine engine(net, model, horizon, cap);
  auto states = engine.consistent_states(hist, time);
  if (states.empty()) throw InconsistentHistory("inconsistent history: no world state reproduces it");
  Rational wt(0), wf(0);
  for (std::size_t w : states) {
    if (engine.worlds().states[w].theta_true)
      wt += engine.worlds().weights[w];
    else
      wf += engine.worlds().weights[w];
  }
  return Rational(wt / (wt + wf));
}

std::vector<std::string> check_significant_time_law(const Network& net, Model model,
                                                    int horizon, std::uint64_t cap) {
  std::vector<std::string> violations;
  auto times = significant_times(net);
  Engine engine(net, model, horizon, cap);
  Rational half = rat(1, 2);
  for (std::size_t u = 0; u < net.agents.size(); ++u) {
    if (!times[u]) {
      violations.push_back("agent '" + net.agents[u].id + "' lacks a significant time");
      continue;
    }
    int sig = *times[u];
    for (std::size_t w = 0; w < engine.state_count(); ++w) {
      for (int t = 0; t <= horizon; ++t) {
        const Rational& mu = engine.belief(static_cast<int>(u), t, w);
        if (t < sig && mu != half) {
          violations.push_back("agent '" + net.agents[u].id + "' has belief != 1/2 at time " +
                               std::to_string(t) + " before significant time");
          break;
        }
        if (t > sig && sig <= horizon &&
            mu != engine.belief(static_cast<int>(u), sig, w)) {
          violations.push_back("agent '" + net.agents[u].id + "' belief moved after significant time");
          break;
        }
      }
    }
  }
  return violations;
}

}  // namespace bayan
