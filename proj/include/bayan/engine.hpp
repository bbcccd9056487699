#ifndef BAYAN_ENGINE_HPP
#define BAYAN_ENGINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bayan/network.hpp"
#include "bayan/rational.hpp"

namespace bayan {

enum class Model { BinaryAction, RevealedBelief };

// Beliefs are stored as posteriors mu = Pr[theta=T | info] in [0, 1].
// Revealed-belief broadcasts are serialized as odds mu/(1-mu).
Rational odds_from_mu(const Rational& mu);
Rational mu_from_odds(const Rational& odds);

struct ActionTrace {
  Model model = Model::BinaryAction;
  int horizon = 0;
  std::vector<std::string> agent_ids;
  std::vector<std::vector<bool>> actions;      // [agent][t], binary model
  std::vector<std::vector<Rational>> beliefs;  // [agent][t], both models

  bool operator==(const ActionTrace& other) const = default;
};

struct ObservationHistory {
  std::string observer_id;
  std::optional<int> own_signal;
  std::map<std::pair<std::string, int>, bool> binary_entries;
  std::map<std::pair<std::string, int>, Rational> belief_entries;  // mu values
};

// Knowledge-refinement table over the whole world-state space: for every
// agent u, time t and state w it tracks the set of states u considers
// possible, refined each round on the broadcasts of u's out-neighbors.
// Everything downstream (simulation, posteriors, information sets, claim
// checks) reads off this table.
class Engine {
 public:
  Engine(const Network& net, Model model, int horizon,
         std::uint64_t cap = kDefaultStateCap);

  const Network& net() const { return *net_; }
  Model model() const { return model_; }
  int horizon() const { return horizon_; }
  const WorldTable& worlds() const { return worlds_; }
  std::size_t state_count() const { return worlds_.states.size(); }

  bool action(int agent, int t, std::size_t w) const;
  const Rational& belief(int agent, int t, std::size_t w) const;

  // States in I(agent, t, w) plus their aggregate (W_T, W_F).
  std::vector<std::size_t> info_set(int agent, int t, std::size_t w) const;
  std::pair<Rational, Rational> info_weights(int agent, int t, std::size_t w) const;

  ActionTrace trace_for(std::size_t w) const;
  std::optional<std::size_t> find_state(const WorldState& ws) const;

  // States reproducing the given history at all entry times < `time`
  // (and the observer's own signal, when present).
  std::vector<std::size_t> consistent_states(const ObservationHistory& hist, int time) const;

 private:
  void run();

  const Network* net_;
  Model model_;
  int horizon_;
  WorldTable worlds_;
  std::vector<std::vector<int>> nbrs_;

  // groups_[t][agent][w]: information-set id; two states share an id iff
  // the agent cannot distinguish them at time t.
  std::vector<std::vector<std::vector<std::int32_t>>> groups_;
  // group_mu_[t][agent][gid]: exact posterior of that information set.
  std::vector<std::vector<std::vector<Rational>>> group_mu_;
  std::vector<std::vector<std::vector<char>>> group_act_;
};

// Convenience wrappers over a one-shot Engine.
ActionTrace simulate(const Network& net, const WorldState& world, int horizon,
                     Model model, std::uint64_t cap = kDefaultStateCap);

Rational posterior(const Network& net, const ObservationHistory& hist, int time,
                   Model model, std::uint64_t cap = kDefaultStateCap);

// Violations of the significant-time law (belief 1/2 before, frozen after),
// checked for every agent and every world state up to `horizon`.
std::vector<std::string> check_significant_time_law(const Network& net, Model model,
                                                    int horizon,
                                                    std::uint64_t cap = kDefaultStateCap);

}  // namespace bayan

#endif
