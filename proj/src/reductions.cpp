#include "bayan/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "reduction_common.hpp"

namespace bayan {

namespace detail {

SatTable base_sat_table(const Formula& formula, const SatWeights& w) {
  SatTable table;
  table.num_vars = formula.num_vars;
  const std::uint32_t total = std::uint32_t{1} << formula.num_vars;
  table.p.resize(total);
  std::vector<bool> assignment(formula.num_vars);
  for (std::uint32_t a = 0; a < total; ++a) {
    for (int v = 0; v < formula.num_vars; ++v) assignment[v] = (a >> v) & 1;
    bool sat = formula.evaluate(assignment);
    Rational pt = w.aux_t * w.b1_t;
    Rational pf = w.aux_f * w.b1_f;
    if (sat) {
      pt += w.aux_t * w.b0_t;
      pf += w.aux_f * w.b0_f;
    }
    table.p[a] = {std::move(pf), std::move(pt)};
  }
  return table;
}

std::array<Rational, 2> table_sum(const SatTable& table, const std::vector<int>& vars,
                                  std::uint32_t key) {
  std::array<Rational, 2> sum{Rational(0), Rational(0)};
  for (std::uint32_t a = 0; a < table.p.size(); ++a) {
    bool match = true;
    for (std::size_t k = 0; k < vars.size() && match; ++k)
      match = ((a >> (vars[k] - 1)) & 1) == ((key >> k) & 1);
    if (!match) continue;
    sum[0] += table.p[a][0];
    sum[1] += table.p[a][1];
  }
  return sum;
}

std::vector<int> prefix_vars(const QBF& qbf, int upto) {
  std::vector<int> vars;
  for (int j = 0; j <= upto && j < static_cast<int>(qbf.blocks.size()); ++j)
    vars.insert(vars.end(), qbf.blocks[j].second.begin(), qbf.blocks[j].second.end());
  return vars;
}

std::vector<std::pair<std::uint32_t, bool>> stage_verdicts(const SatTable& table,
                                                           const QBF& qbf, int stage) {
  const int K = static_cast<int>(qbf.blocks.size());
  // Blocks K..stage, i.e. indices 0..K-stage in outermost-first order.
  std::vector<int> vars = prefix_vars(qbf, K - stage);
  std::vector<std::pair<std::uint32_t, bool>> out;
  const std::uint32_t total = std::uint32_t{1} << vars.size();
  for (std::uint32_t key = 0; key < total; ++key) {
    auto sum = table_sum(table, vars, key);
    out.emplace_back(key, sum[1] > sum[0]);  // ties resolve to F
  }
  return out;
}

void apply_stage(SatTable& table, const QBF& qbf, int stage, const StageModel& model) {
  const int K = static_cast<int>(qbf.blocks.size());
  std::vector<int> vars = prefix_vars(qbf, K - stage);
  auto verdicts = stage_verdicts(table, qbf, stage);
  std::vector<bool> verdict_of(verdicts.size());
  for (const auto& [key, v] : verdicts) verdict_of[key] = v;

  for (std::uint32_t a = 0; a < table.p.size(); ++a) {
    std::uint32_t key = 0;
    for (std::size_t k = 0; k < vars.size(); ++k)
      key |= ((a >> (vars[k] - 1)) & 1) << k;
    bool v = verdict_of[key];
    table.p[a][1] *= model.factors.get(v, true) * model.aux_t;
    table.p[a][0] *= model.factors.get(v, false) * model.aux_f;
  }
}

SatWeights canonical_sat_weights(const ReductionParams& params) {
  Alphas al = base_alphas();
  long b = params.b;
  SatWeights w;
  w.aux_t = w.aux_f = rat(1);
  // EVAL then A then B, per branch.
  w.b1_t = rat(9, 10) * rat_pow(al.a1, b) * (1 - rat_pow(al.a3, b));
  w.b1_f = rat(2, 5) * (1 - rat_pow(al.a2, b)) * rat_pow(al.a4, b);
  w.b0_t = rat(1, 10) * (1 - rat_pow(al.a1, b)) * rat_pow(al.a3, b);
  w.b0_f = rat(3, 5) * rat_pow(al.a2, b) * (1 - rat_pow(al.a4, b));
  return w;
}

}  // namespace detail

namespace {

mpz_class count_satisfying(const Formula& formula) {
  mpz_class count = 0;
  std::vector<bool> assignment(formula.num_vars);
  const std::uint64_t total = std::uint64_t{1} << formula.num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int v = 0; v < formula.num_vars; ++v) assignment[v] = (bits >> v) & 1;
    if (formula.evaluate(assignment)) count += 1;
  }
  return count;
}

// Weight of every forced auxiliary signal plus the variable pairs: the
// assignment-independent part of each consistent configuration's weight.
void accumulate_aux_weights(const Assembly& assembly, const std::vector<GadgetInstance>& gadgets,
                            int num_vars, CompiledInstance& inst) {
  Rational wt(1), wf(1);
  SignalDistribution vd = detail::var_dist();
  for (int v = 1; v <= num_vars; ++v) {
    wt *= vd.probs_true[0] * vd.probs_true[1];
    wf *= vd.probs_false[0] * vd.probs_false[1];
  }
  for (const auto& g : gadgets)
    for (const auto& [id, s] : g.forced_signals) {
      const auto& d = *assembly.net().agent(id).signal;
      wt *= d.probs_true[s];
      wf *= d.probs_false[s];
    }
  inst.weights.aux_t = wt;
  inst.weights.aux_f = wf;
}

int count_registry(const Network& net) {
  std::set<SignalDistribution> distinct;
  for (const Agent& a : net.agents)
    if (a.signal) distinct.insert(*a.signal);
  return static_cast<int>(distinct.size());
}

}  // namespace

CompiledInstance reduce_3sat(const Formula& formula, const ReductionParams& params) {
  std::string err = formula.validate(3);
  if (!err.empty()) throw BuildError("reduce_3sat: " + err);

  CompiledInstance inst;
  inst.kind = CompiledInstance::Kind::Sat3;
  inst.params = params;
  inst.source_formula = formula;
  inst.model = Model::BinaryAction;
  inst.observer_id = params.observer_id;
  inst.query_time = 2;

  Assembly& a = inst.assembly;
  const bool trim = params.trim_equalization;
  const std::optional<Rational> floor = params.prob_floor();
  SignalDistribution vd = detail::var_dist();
  detail::Alphas al = detail::base_alphas();

  for (int v = 1; v <= formula.num_vars; ++v) {
    a.add_informative(detail::var_id(v, true), vd, "variable", std::to_string(v));
    a.add_informative(detail::var_id(v, false), vd, "variable", std::to_string(v));
  }
  a.add_informative("EVAL", vd, "eval", "");
  a.add_informative("A", detail::amp_dist(al.a1, al.a2, params.b), "amplifier", "A");
  a.add_informative("B", detail::amp_dist(al.a3, al.a4, params.b), "amplifier", "B");

  std::vector<GadgetInstance> gadgets;
  for (int v = 1; v <= formula.num_vars; ++v) {
    std::vector<Target> pair{{detail::var_id(v, true), vd}, {detail::var_id(v, false), vd}};
    gadgets.push_back(build_counting(a, "v" + std::to_string(v), pair, 1,
                                     CountingClaim::Mode::Exactly, true, floor, trim));
  }
  for (std::size_t j = 0; j < formula.clauses.size(); ++j) {
    std::vector<std::string> lits;
    for (const Literal& l : formula.clauses[j].literals)
      lits.push_back(detail::var_id(l.var, l.positive));
    gadgets.push_back(
        build_clause(a, "c" + std::to_string(j + 1), lits, "EVAL", vd, floor, trim));
  }
  gadgets.push_back(build_not_equal(a, "ne_ea", {"EVAL", vd},
                                    {"A", *a.net().agent("A").signal}, floor, trim));
  gadgets.push_back(build_not_equal(a, "ne_ab", {"A", *a.net().agent("A").signal},
                                    {"B", *a.net().agent("B").signal}, floor, trim));

  a.add_relay(inst.observer_id, 2, "observer", "");
  a.set_observer(inst.observer_id);
  for (const auto& g : gadgets)
    for (const auto& id : g.observer_attach) a.observe(inst.observer_id, id);

  inst.expected_history = a.designated_history(inst.observer_id, inst.query_time);

  accumulate_aux_weights(a, gadgets, formula.num_vars, inst);
  SatWeights canonical = detail::canonical_sat_weights(params);
  inst.weights.b1_t = canonical.b1_t;
  inst.weights.b1_f = canonical.b1_f;
  inst.weights.b0_t = canonical.b0_t;
  inst.weights.b0_f = canonical.b0_f;
  inst.registry_size = count_registry(a.net());
  return inst;
}

AnalyticResult analytic_posterior_3sat(const Formula& formula, const ReductionParams& params) {
  if (formula.num_vars > params.analytic_cap)
    throw CapExceeded("analytic cap exceeded");
  std::string err = formula.validate(3);
  if (!err.empty()) throw BuildError("analytic_posterior_3sat: " + err);

  SatWeights w = detail::canonical_sat_weights(params);
  mpz_class sat_count = count_satisfying(formula);
  mpz_class total = mpz_class(1) << formula.num_vars;

  Rational wt = Rational(total) * w.b1_t + Rational(sat_count) * w.b0_t;
  Rational wf = Rational(total) * w.b1_f + Rational(sat_count) * w.b0_f;
  AnalyticResult out;
  out.mu = wt / (wt + wf);
  out.verdict_true = wt > wf;
  return out;
}

AnalyticResult analytic_observer_posterior(const CompiledInstance& inst) {
  switch (inst.kind) {
    case CompiledInstance::Kind::Sat3: {
      const Formula& formula = *inst.source_formula;
      const SatWeights& w = inst.weights;
      mpz_class sat_count = count_satisfying(formula);
      mpz_class total = mpz_class(1) << formula.num_vars;
      Rational wt = w.aux_t * (Rational(total) * w.b1_t + Rational(sat_count) * w.b0_t);
      Rational wf = w.aux_f * (Rational(total) * w.b1_f + Rational(sat_count) * w.b0_f);
      AnalyticResult out;
      out.mu = wt / (wt + wf);
      out.verdict_true = wt > wf;
      return out;
    }
    case CompiledInstance::Kind::Tqbf:
      return detail::analytic_observer_posterior_tqbf(inst);
    default:
      throw BuildError("analytic_observer_posterior: unsupported instance kind");
  }
}

// --- choose_b ---------------------------------------------------------------

bool choose_b_holds(int num_vars, long b) {
  Rational a = rat(1, 200 * num_vars);
  Rational e2 = rat(1, 100 * num_vars);
  Rational am = rat_pow(Rational(1 - a), b), ap = rat_pow(Rational(1 + a), b);
  Rational bm = rat_pow(Rational(1 - e2), b), bp = rat_pow(Rational(1 + e2), b);
  Rational p25 = rat_pow(rat(2, 5), b), p35 = rat_pow(rat(3, 5), b);
  Rational p910 = rat_pow(rat(9, 10), b), p49 = rat_pow(rat(4, 9), b);
  mpz_class two_n = mpz_class(1) << num_vars;

  auto within = [&](const Rational& v, const Rational& lo, const Rational& hi) {
    return lo <= v && v <= hi;
  };
  // Eqs (1)-(4): per-branch products against (1 +- 1/200N)^b.
  if (!within(Rational(rat(9, 10) * (1 - p910)), am, ap)) return false;
  if (!within(Rational(rat(2, 5) * (1 - p35)), am, ap)) return false;
  if (!within(Rational(rat(1, 10) * (1 - p25)), am, ap)) return false;
  if (!within(Rational(rat(3, 5) * (1 - p35)), am, ap)) return false;
  // Eqs (13)-(14): branch sums against (1 +- 1/100N)^b.
  Rational sat_t = rat(1, 10) * (1 - p25) + rat(9, 10) * p49 * (1 - p910);
  if (!within(sat_t, bm, bp)) return false;
  if (!within(Rational(1 - p35), bm, bp)) return false;
  if (!within(Rational(rat(9, 10) * (1 - p910)), bm, bp)) return false;
  if (!within(Rational(rat(2, 5) * (1 - p35)), bm, bp)) return false;
  // Eq (7): 1 - mu <= 2^N 0.61^b / 0.89^b <= 0.69^b.
  if (!(rat_pow(rat(3, 5), b) * bp <= rat_pow(rat(61, 100), b))) return false;
  if (!(rat_pow(rat(9, 10), b) * bm >= rat_pow(rat(89, 100), b))) return false;
  if (!(Rational(two_n) <= rat_pow(rat(6141, 6100), b))) return false;
  // Eq (8): 1 - mu >= 0.59^b / (2^{N+1} 0.91^b) >= 0.64^b.
  if (!(rat_pow(rat(3, 5), b) * bm >= rat_pow(rat(59, 100), b))) return false;
  if (!(Rational((rat_pow(rat(9, 10), b) + rat_pow(rat(3, 5), b)) * bp) <=
        Rational(2 * rat_pow(rat(91, 100), b))))
    return false;
  if (!(Rational(2 * two_n) <= rat_pow(rat(1475, 1456), b))) return false;
  // Eq (12): unsatisfiable-case interval.
  if (!(Rational(p25 * bp) <= Rational(rat_pow(rat(69, 100), b) * p35 * bm))) return false;
  if (!(Rational(p25 * bm) >= Rational(rat_pow(rat(16, 25), b) * (p25 + p35) * bp)))
    return false;
  return true;
}

long choose_b(int num_vars) {
  if (num_vars < 1) throw BuildError("choose_b needs at least one variable");
  for (long b = 1;; ++b)
    if (choose_b_holds(num_vars, b)) return b;
}

// --- eps tie-break transform --------------------------------------------------

Network apply_eps_tiebreak(const Network& net, const Rational& eps, std::uint64_t cap) {
  if (!(eps > 0)) throw BuildError("eps must be positive");
  auto times = significant_times(net);
  int max_time = 0;
  for (const auto& t : times) {
    if (!t) throw BuildError("apply_eps_tiebreak requires a structured network");
    max_time = std::max(max_time, *t);
  }

  Engine engine(net, Model::BinaryAction, max_time + 1, cap);
  std::optional<Rational> min_gap;  // min over max(odds, 1/odds) of untied beliefs
  Rational half = rat(1, 2);
  for (std::size_t u = 0; u < net.agents.size(); ++u)
    for (int t = 0; t <= max_time + 1; ++t)
      for (std::size_t w = 0; w < engine.state_count(); ++w) {
        const Rational& mu = engine.belief(static_cast<int>(u), t, w);
        if (mu == half || mu == 0 || mu == 1) continue;
        Rational odds = odds_from_mu(mu);
        if (odds < 1) odds = 1 / odds;
        if (!min_gap || odds < *min_gap) min_gap = odds;
      }
  if (!min_gap)
    throw BuildError("no valid eps: every belief is exactly tied");
  if (!(Rational(1 + eps) < *min_gap))
    throw BuildError("no valid eps: requested eps exceeds the likelihood gap bound");

  const long n_agents = static_cast<long>(net.agents.size());
  Rational rho = 1 + eps / (100 * n_agents);
  Rational lambda_eps = 1 + eps / 10;
  Rational rho_pow = rat_pow(rho, static_cast<unsigned long>(n_agents));
  if (!(lambda_eps > rho_pow))
    throw BuildError("no valid eps: EPS likelihood does not dominate the micro-signals");
  if (!(Rational(lambda_eps * rho_pow) <= Rational(1 + eps)))
    throw BuildError("no valid eps: perturbation exceeds eps");

  Network out;
  SignalDistribution micro =
      SignalDistribution::binary(Rational(rho / (rho + 1)), Rational(1 / (rho + 1)));
  for (const Agent& agent : net.agents) {
    Agent copy = agent;
    if (!copy.signal) copy.signal = micro;
    out.add_agent(std::move(copy));
  }
  out.designated_observer = net.designated_observer;
  SignalDistribution eps_dist = distribution_from_ratios(std::nullopt, lambda_eps);
  out.add_agent(Agent{"EPS", eps_dist, 0});
  for (const auto& e : net.edges) out.add_edge_idx(e.first, e.second);
  int eps_idx = out.require("EPS");
  for (std::size_t u = 0; u < net.agents.size(); ++u)
    out.add_edge_idx(static_cast<int>(u), eps_idx);
  return out;
}

}  // namespace bayan
