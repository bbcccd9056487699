#ifndef BAYAN_GADGETS_HPP
#define BAYAN_GADGETS_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bayan/engine.hpp"
#include "bayan/network.hpp"

namespace bayan {

// Multiplicative analogue of the paper's log-space threshold delta. A
// gadget in direction Greater reveals that the product of target ratios
// exceeds ratio_threshold; Less that it falls below.
struct SeparatorChoice {
  Rational ratio_threshold;
  enum class Direction { Greater, Less } direction = Direction::Greater;
};

// Solves the likelihood<->probability correspondence. Specifying both
// ratios pins the distribution; specifying one leaves a free side which is
// fixed at probability 1/2.
SignalDistribution distribution_from_ratios(const std::optional<Rational>& lambda0,
                                            const std::optional<Rational>& lambda1);

// Distribution revealing a single designated signal of likelihood ratio r
// (r != 1): the revealed value and its carrier distribution.
std::pair<SignalDistribution, int> pinned_from_ratio(const Rational& ratio);

// Strictly separating rational between two adjacent achievable products
// lo < hi. Defaults to the arithmetic mean; when a probability floor is
// given and the mean would push the auxiliary signal probabilities below
// it, the separator is pulled towards 1 (staying within a factor two of
// the nearer product).
Rational choose_separator(const Rational& lo, const Rational& hi,
                          const std::optional<Rational>& prob_floor = std::nullopt);

struct Target {
  std::string id;
  SignalDistribution dist;
};

// ---------------------------------------------------------------------------
// Claim metadata carried by each gadget, consumed by check_gadget_claim.

struct ThresholdClaim {
  std::vector<Target> targets;
  SeparatorChoice sep;
};

struct CountingClaim {
  std::vector<Target> targets;
  int k = 0;
  enum class Mode { Exactly, AtLeast, AtMost } mode = Mode::Exactly;
  bool equalized = false;
  std::vector<SeparatorChoice> seps;
};

struct NotEqualClaim {
  Target u, v;
  std::vector<SeparatorChoice> seps;
};

struct RbClaim {
  enum class Kind { Variable, Clause, NeutralizerE, NeutralizerEval, Amplifier } kind;
  std::vector<Target> targets;
  Rational designated_odds;  // of the summing broadcaster
};

struct CouplerTripleClaim {
  std::string f_id, c_id, d_id, e_id;
};

using GadgetClaim = std::variant<std::monostate, ThresholdClaim, CountingClaim,
                                 NotEqualClaim, RbClaim, CouplerTripleClaim>;

struct GadgetInstance {
  std::string name;
  std::vector<std::string> agents;           // agents this builder added
  std::vector<std::string> observer_attach;  // what an observer must observe
  std::map<std::string, int> forced_signals;
  std::optional<Rational> equalization_factor;
  GadgetClaim claim;
};

// ---------------------------------------------------------------------------
// Assembly: a network under construction. Builders add agents and logical
// observation edges; dummy relay chains ("spines") are inserted so every
// agent learns at a single significant time.

class Assembly {
 public:
  explicit Assembly(Model model = Model::BinaryAction) : model_(model) {}

  Model model() const { return model_; }
  Network& net() { return net_; }
  const Network& net() const { return net_; }

  int add_informative(const std::string& id, SignalDistribution dist,
                      const std::string& prov_kind = "", const std::string& prov_src = "");
  int add_relay(const std::string& id, int sig_time,
                const std::string& prov_kind = "", const std::string& prov_src = "");

  // Logical edge: observer sees target's significant broadcast, relayed
  // through however many dummies the significant-time gap requires.
  void observe(const std::string& observer, const std::string& target);

  int sig_time(const std::string& id) const;
  bool has_agent(const std::string& id) const { return net_.index_of(id) >= 0; }

  // Fixed significant-time broadcasts, by construction of the reduction.
  void designate_signal(const std::string& id, int signal);
  void designate_relay_action(const std::string& id, bool action);
  void designate_relay_belief(const std::string& id, const Rational& mu);

  bool has_designation(const std::string& id) const;
  std::optional<int> forced_signal(const std::string& id) const;

  // History of `observer` covering every direct neighbor at all times
  // below query_time; every neighbor must carry a designation.
  ObservationHistory designated_history(const std::string& observer, int query_time) const;

  void set_observer(const std::string& id) { net_.designated_observer = id; }

  const std::map<std::string, std::pair<std::string, std::string>>& provenance() const {
    return provenance_;
  }

 private:
  struct Designation {
    bool is_action = false;
    bool action = false;
    Rational mu;
    std::optional<int> signal;
  };

  // Spine node of `target` at the given height above its significant time.
  std::string tap(const std::string& target, int height);
  Designation relay_designation(const std::string& target) const;

  Model model_;
  Network net_;
  std::map<std::string, int> sig_;
  std::map<std::string, std::vector<std::string>> spine_;
  std::map<std::string, Designation> designated_;
  std::map<std::string, std::pair<std::string, std::string>> provenance_;
};

// ---------------------------------------------------------------------------
// Builders. Targets must already exist in the assembly; each builder adds
// its auxiliary agents, wires them, designates their broadcasts and
// returns the gadget record. Passing trim = true omits the
// equalization-only agents (compensating C side, equalizer); posteriors
// then pick up a state-dependent-free but theta-dependent factor which the
// analytic calculators account for.

GadgetInstance build_threshold(Assembly& a, const std::string& name,
                               const std::vector<Target>& targets, const SeparatorChoice& sep,
                               bool trim = false);

GadgetInstance build_counting(Assembly& a, const std::string& name,
                              const std::vector<Target>& targets, int k,
                              CountingClaim::Mode mode, bool with_equalizer,
                              const std::optional<Rational>& prob_floor = std::nullopt,
                              bool trim = false);

GadgetInstance build_not_equal(Assembly& a, const std::string& name, const Target& u,
                               const Target& v,
                               const std::optional<Rational>& prob_floor = std::nullopt,
                               bool trim = false);

GadgetInstance build_clause(Assembly& a, const std::string& name,
                            const std::vector<std::string>& literal_ids,
                            const std::string& eval_id, const SignalDistribution& dist,
                            const std::optional<Rational>& prob_floor = std::nullopt,
                            bool trim = false);

// Revealed-belief gadgets (Section 7 machinery).
SignalDistribution rb_common_distribution();   // p_T = 3/4, p_F = 1/4
SignalDistribution rb_ternary_distribution();  // q'' = 9/13, q' = 3/13

GadgetInstance build_rb_variable(Assembly& a, const std::string& name, const std::string& x_id,
                                 const std::string& notx_id, const SignalDistribution& dist);
GadgetInstance build_rb_clause(Assembly& a, const std::string& name, const std::string& lit_a,
                               const std::string& lit_b, const std::string& e_id,
                               const std::string& eval_id, const SignalDistribution& dist,
                               const SignalDistribution& e_dist);
GadgetInstance build_rb_neutralizer_e(Assembly& a, const std::string& name,
                                      const std::string& e_id, const SignalDistribution& e_dist);
GadgetInstance build_rb_neutralizer_eval(Assembly& a, const std::string& name,
                                         const std::string& eval_id,
                                         const SignalDistribution& dist);
GadgetInstance build_rb_amplifier_pair(Assembly& a, const std::string& name,
                                       const std::string& eval_id,
                                       const SignalDistribution& dist);

// ---------------------------------------------------------------------------
// Claim verification by exhaustive enumeration on a small host.

struct SubClaim {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ClaimReport {
  std::vector<SubClaim> items;
  bool all_pass() const;
  std::string summary() const;
};

ClaimReport check_gadget_claim(const Assembly& host, const GadgetInstance& gadget,
                               std::uint64_t cap = kDefaultStateCap);

}  // namespace bayan

#endif
