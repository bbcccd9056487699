#ifndef BAYAN_NETWORK_HPP
#define BAYAN_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bayan/rational.hpp"

namespace bayan {

// Per-agent signal structure: Pr[S(u)=s | theta] for each signal value s.
// Binary agents have alphabet size 2; the revealed-belief clause machinery
// uses ternary signals.
struct SignalDistribution {
  std::vector<Rational> probs_true;
  std::vector<Rational> probs_false;

  int alphabet_size() const { return static_cast<int>(probs_true.size()); }

  // Likelihood ratio of signal value s. Requires probs_false[s] > 0.
  Rational ratio(int s) const;

  // Convention throughout: signal 1 is evidence towards theta = T.
  bool informative() const;

  // Empty string when valid; otherwise a description of the violation.
  std::string validate() const;

  static SignalDistribution binary(const Rational& p_true, const Rational& p_false);
  static SignalDistribution ternary(std::vector<Rational> p_true, std::vector<Rational> p_false);

  bool operator==(const SignalDistribution& other) const = default;
  bool operator<(const SignalDistribution& other) const;
};

struct Agent {
  std::string id;
  std::optional<SignalDistribution> signal;  // absent => uninformative relay
  std::optional<int> significant_time;
};

struct Network {
  std::vector<Agent> agents;
  // (observer index, observed index): the observer sees the observed
  // agent's broadcasts.
  std::vector<std::pair<int, int>> edges;
  std::optional<std::string> designated_observer;

  int add_agent(Agent a);  // throws BuildError on duplicate id
  void add_edge(const std::string& observer, const std::string& observed);
  void add_edge_idx(int observer, int observed);

  int index_of(const std::string& id) const;  // -1 when absent
  int require(const std::string& id) const;   // throws BuildError when absent
  const Agent& agent(const std::string& id) const { return agents[require(id)]; }

  std::vector<std::vector<int>> out_neighbors() const;
  std::vector<int> in_degrees() const;

 private:
  std::map<std::string, int> index_;
};

// One joint assignment of theta and private signals. signals[i] is the
// signal value of agent i, or -1 for agents without signals.
struct WorldState {
  bool theta_true = false;
  std::vector<int> signals;
};

struct WorldTable {
  std::vector<WorldState> states;
  std::vector<Rational> weights;  // prior weights; sum to exactly 1
};

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 24;

// Structured-mode validation: DAG, informative agents are sinks, only the
// designated observer has in-degree zero, and significant times follow the
// unique-path-length rule (every observed agent sits exactly one step
// earlier). Violations are data, not failures.
std::vector<std::string> validate_structured(const Network& net);

// Computed significant times keyed by agent index; an entry is absent when
// the agent's paths disagree (reported by validate_structured).
std::vector<std::optional<int>> significant_times(const Network& net);

// Exhaustive prior: theta in {T, F} x one signal per informative agent.
// Zero-probability states are skipped rather than carried with weight 0.
WorldTable enumerate_world_states(const Network& net, std::uint64_t cap = kDefaultStateCap);

// Number of states enumerate_world_states would walk (before skipping),
// used for cap decisions without enumerating.
mpz_class world_state_count(const Network& net);

}  // namespace bayan

#endif
