#ifndef BAYAN_REDUCTION_COMMON_HPP
#define BAYAN_REDUCTION_COMMON_HPP

#include <array>

#include "bayan/reductions.hpp"

namespace bayan::detail {

struct Alphas {
  Rational a1, a2, a3, a4;
};

inline Alphas base_alphas() {
  return {rat(2, 5), rat(3, 5), rat(9, 10), rat(3, 5)};
}

// Table of per-parity constants for the quantifier stages; 4/9 * 9/10 is
// exactly 2/5.
inline Alphas parity_alphas(int stage) {
  if (stage % 2 == 0) return {rat(2, 5), rat(9, 10), rat(9, 10), rat(2, 5)};
  return {rat(9, 10), rat(2, 5), rat(2, 5), rat(9, 10)};
}

inline SignalDistribution amp_dist(const Rational& alpha_hi, const Rational& alpha_lo, long b) {
  // p_T = 1 - alpha_hi^b, p_F = alpha_lo^b
  Rational p_t = Rational(1 - rat_pow(alpha_hi, b));
  Rational p_f = rat_pow(alpha_lo, b);
  if (!(p_t > p_f))
    throw BuildError("amplification exponent too small: agent would be uninformative");
  return SignalDistribution::binary(p_t, p_f);
}

inline SignalDistribution var_dist() {
  return SignalDistribution::binary(rat(9, 10), rat(2, 5));
}

inline std::string var_id(int v, bool positive) {
  return positive ? "x" + std::to_string(v) : "not_x" + std::to_string(v);
}

// Exact posterior table over full assignments: p[a][theta] is the joint
// weight of the consistent configurations selecting assignment a, with
// theta indexed 0 = F, 1 = T. Assignment bit v-1 carries variable v.
struct SatTable {
  int num_vars = 0;
  std::vector<std::array<Rational, 2>> p;
};

SatTable base_sat_table(const Formula& formula, const SatWeights& w);

// Sums the table over all assignments extending the given values of
// `vars`; key bit k corresponds to vars[k].
std::array<Rational, 2> table_sum(const SatTable& table, const std::vector<int>& vars,
                                  std::uint32_t key);

// Variables of blocks[0..upto] (outermost first), concatenated.
std::vector<int> prefix_vars(const QBF& qbf, int upto);

// Stage machinery shared by reduce_tqbf / analytic / block ratios.
struct StageModel {
  StageFactors factors;
  Rational aux_t = 1, aux_f = 1;
};

// Applies stage i (paper numbering, 2..K): multiplies every row by the
// factor selected by the previous observer's action on that row's prefix.
void apply_stage(SatTable& table, const QBF& qbf, int stage, const StageModel& model);

// A(OBS_{i-1}) for every assignment of blocks K..i. Returned map is keyed
// by the packed prefix bits.
std::vector<std::pair<std::uint32_t, bool>> stage_verdicts(const SatTable& table,
                                                           const QBF& qbf, int stage);

SatWeights canonical_sat_weights(const ReductionParams& params);

}  // namespace bayan::detail

#endif
