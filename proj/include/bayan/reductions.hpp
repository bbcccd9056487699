#ifndef BAYAN_REDUCTIONS_HPP
#define BAYAN_REDUCTIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bayan/formula.hpp"
#include "bayan/gadgets.hpp"

namespace bayan {

struct ReductionParams {
  long b = 20;                      // amplification exponent
  bool bounded_mode = false;        // route A/B machinery through couplers
  Rational eps_bounded = rat(1, 10);
  Rational eta;                     // Eq.(17) residual target; 2^-64 default
  bool trim_equalization = false;   // drop compensating agents (micro instances)
  std::string observer_id = "OBS";
  int analytic_cap = 24;            // max N for the analytic calculators

  ReductionParams() : eta(rat(1), rat_pow(rat(2), 64)) {}

  Rational prob_floor() const { return rat_pow(rat(2, 5), b); }
};

// Branch products of the base reduction: the (EVAL, A, B) signal weights
// for the two consistent branches, plus the assignment-independent weight
// of everything else (variable pairs and gadget auxiliaries) per state of
// the world. With full equalization aux_t == aux_f.
struct SatWeights {
  Rational aux_t, aux_f;
  Rational b1_t, b1_f;  // branch S(EVAL) = 1, any assignment
  Rational b0_t, b0_f;  // branch S(EVAL) = 0, satisfying assignments only
};

// Per-stage multiplier of the quantifier-switch machinery, keyed by the
// previous observer's action and theta.
struct StageFactors {
  Rational tt, tf, ft, ff;
  const Rational& get(bool verdict_true, bool theta_true) const {
    return verdict_true ? (theta_true ? tt : tf) : (theta_true ? ft : ff);
  }
};

struct CompiledInstance {
  enum class Kind { Sat3, Tqbf, Sharp2Sat };
  Kind kind = Kind::Sat3;
  Assembly assembly;
  std::string observer_id;
  int query_time = 2;
  Model model = Model::BinaryAction;
  ObservationHistory expected_history;
  std::optional<Formula> source_formula;
  std::optional<QBF> source_qbf;
  ReductionParams params;

  SatWeights weights;               // binary-action reductions
  std::vector<StageFactors> stages; // tqbf stages i = 2..K (in order)
  std::vector<Rational> stage_aux_t, stage_aux_f;

  int registry_size = 0;            // distinct signal distributions
  Rational bounded_residual;        // max Eq.(17) relative residual
  Rational slack_budget;

  const Network& network() const { return assembly.net(); }
};

struct AnalyticResult {
  Rational mu;
  bool verdict_true = false;
};

// --- base reduction -------------------------------------------------------

CompiledInstance reduce_3sat(const Formula& formula, const ReductionParams& params);

// Closed-form observer posterior of the canonical (fully equalized)
// reduction; independent of any compiled network.
AnalyticResult analytic_posterior_3sat(const Formula& formula, const ReductionParams& params);

// Observer posterior of a specific compiled instance, from its stored
// weight model; agrees with the engine exactly, including trimmed builds.
AnalyticResult analytic_observer_posterior(const CompiledInstance& inst);

// Smallest b for which every approximation step of the base analysis holds
// as an exact rational inequality.
long choose_b(int num_vars);
bool choose_b_holds(int num_vars, long b);  // the inequality battery itself

// --- quantified reduction -------------------------------------------------

CompiledInstance reduce_tqbf(const QBF& qbf, const ReductionParams& params);

AnalyticResult analytic_posterior_tqbf(const QBF& qbf, const ReductionParams& params);

// Exact multiplicative m-ratios of stage `stage` (2..K) for a fixed
// assignment of the blocks above it, outermost first. A side is empty when
// no block assignment yields that action for the previous observer.
struct BlockRatios {
  std::optional<Rational> m_ratio_t, m_ratio_f;
};
BlockRatios compute_block_ratios(const QBF& qbf, const ReductionParams& params, int stage,
                                 const std::vector<int>& prefix_bits);

// Observer beliefs of intermediate stage observers, keyed by the prefix
// assignment (blocks outermost first, one int per prefix variable).
std::vector<std::pair<std::vector<int>, Rational>> tqbf_stage_beliefs(
    const QBF& qbf, const ReductionParams& params, int stage);

// Verifies that the modified not-equal machinery of every stage excludes
// exactly the equal-action combinations, using the exact m-ratios.
ClaimReport check_modified_not_equal(const QBF& qbf, const ReductionParams& params);
ClaimReport check_modified_not_equal(const CompiledInstance& inst);

// --- revealed-belief reduction ---------------------------------------------

CompiledInstance reduce_sharp_2sat(const Formula& formula);

// Exact observer odds mu/(1-mu) of the revealed-belief reduction.
Rational analytic_ratio_sharp(const Formula& formula, int cap = 24);

// --- bounded-signal variant -------------------------------------------------

// Root of Eq.(17) and the derived coupler distributions for one alpha pair.
struct CouplerParams {
  Rational q_t, q_f, p_t, p_f;
  Rational residual;  // |c1/c2 - 1| after rationalizing q_f
};
CouplerParams solve_coupler(const Rational& alpha1, const Rational& alpha2,
                            const Rational& eps, const Rational& eta);

CompiledInstance reduce_bounded(const Formula& formula, const ReductionParams& params);
CompiledInstance reduce_bounded(const QBF& qbf, const ReductionParams& params);
AnalyticResult analytic_posterior_bounded(const Formula& formula, const ReductionParams& params);
AnalyticResult analytic_posterior_bounded(const QBF& qbf, const ReductionParams& params);

// --- tie-break removal -------------------------------------------------------

// Remark-style transform: adds an EPS agent observed by everyone and gives
// every relay a reciprocal micro-signal; significant-time actions are
// unchanged and no belief is ever exactly 1/2 afterwards.
Network apply_eps_tiebreak(const Network& net, const Rational& eps,
                           std::uint64_t cap = kDefaultStateCap);

}  // namespace bayan

#endif
