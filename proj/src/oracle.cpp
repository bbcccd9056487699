#include "bayan/oracle.hpp"

#include <set>

namespace bayan {

std::string Formula::validate(int max_arity) const {
  if (num_vars < 0) return "negative variable count";
  for (const Clause& c : clauses) {
    if (c.literals.empty()) return "empty clause";
    if (static_cast<int>(c.literals.size()) > max_arity)
      return "clause arity exceeds " + std::to_string(max_arity);
    std::set<int> vars;
    for (const Literal& l : c.literals) {
      if (l.var < 1 || l.var > num_vars) return "literal out of range";
      if (!vars.insert(l.var).second) return "repeated variable in clause";
    }
  }
  return "";
}

bool Formula::evaluate(const std::vector<bool>& assignment) const {
  for (const Clause& c : clauses) {
    bool sat = false;
    for (const Literal& l : c.literals)
      sat = sat || (assignment[l.var - 1] == l.positive);
    if (!sat) return false;
  }
  return true;
}

std::string QBF::validate() const {
  if (blocks.empty()) return "no quantifier blocks";
  std::set<int> seen;
  int total = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].second.empty()) return "empty quantifier block";
    if (i > 0 && blocks[i].first == blocks[i - 1].first)
      return "quantifiers do not alternate";
    for (int v : blocks[i].second) {
      if (v < 1 || v > matrix.num_vars) return "quantified variable out of range";
      if (!seen.insert(v).second) return "variable quantified twice";
    }
    total += static_cast<int>(blocks[i].second.size());
  }
  if (blocks.back().first != Quantifier::Exists)
    return "innermost quantifier must be existential";
  if (total != matrix.num_vars) return "unquantified variable";
  return matrix.validate();
}

namespace oracle {

SatResult brute_sat(const Formula& formula) {
  if (formula.num_vars > 24) throw CapExceeded("brute_sat cap is 24 variables");
  std::string err = formula.validate();
  if (!err.empty()) throw BuildError("brute_sat: " + err);

  SatResult result;
  std::vector<bool> assignment(formula.num_vars);
  const std::uint64_t total = std::uint64_t{1} << formula.num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int v = 0; v < formula.num_vars; ++v) assignment[v] = (bits >> v) & 1;
    if (formula.evaluate(assignment)) {
      result.count += 1;
      if (!result.witness) {
        result.satisfiable = true;
        result.witness = assignment;
      }
    }
  }
  return result;
}

namespace {

bool tqbf_rec(const QBF& qbf, std::size_t block, std::vector<bool>& assignment) {
  if (block == qbf.blocks.size()) return qbf.matrix.evaluate(assignment);
  const auto& [quant, vars] = qbf.blocks[block];
  const std::uint64_t total = std::uint64_t{1} << vars.size();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::size_t k = 0; k < vars.size(); ++k)
      assignment[vars[k] - 1] = (bits >> k) & 1;
    bool sub = tqbf_rec(qbf, block + 1, assignment);
    if (quant == Quantifier::Exists && sub) return true;
    if (quant == Quantifier::ForAll && !sub) return false;
  }
  return quant == Quantifier::ForAll;
}

}  // namespace

bool brute_tqbf(const QBF& qbf) {
  if (qbf.matrix.num_vars > 20) throw CapExceeded("brute_tqbf cap is 20 variables");
  std::string err = qbf.validate();
  if (!err.empty()) throw BuildError("brute_tqbf: " + err);
  std::vector<bool> assignment(qbf.matrix.num_vars);
  return tqbf_rec(qbf, 0, assignment);
}

mpz_class count_2sat(const Formula& formula) {
  if (formula.num_vars > 24) throw CapExceeded("count_2sat cap is 24 variables");
  std::string err = formula.validate(2);
  if (!err.empty()) throw BuildError("count_2sat: " + err);
  mpz_class count = 0;
  std::vector<bool> assignment(formula.num_vars);
  const std::uint64_t total = std::uint64_t{1} << formula.num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int v = 0; v < formula.num_vars; ++v) assignment[v] = (bits >> v) & 1;
    if (formula.evaluate(assignment)) count += 1;
  }
  return count;
}

namespace {

// Full joint signal configurations, walked independently of the engine's
// enumeration (theta innermost here, outermost there).
struct NaiveSpace {
  std::vector<int> informative;
  std::vector<std::vector<int>> configs;  // signal values per informative slot
  std::vector<Rational> weight_t, weight_f;
};

NaiveSpace naive_space(const Network& net) {
  NaiveSpace space;
  for (std::size_t i = 0; i < net.agents.size(); ++i)
    if (net.agents[i].signal) space.informative.push_back(static_cast<int>(i));

  std::vector<int> current(space.informative.size(), 0);
  while (true) {
    space.configs.push_back(current);
    Rational wt(1), wf(1);
    for (std::size_t k = 0; k < space.informative.size(); ++k) {
      const auto& d = *net.agents[space.informative[k]].signal;
      wt *= d.probs_true[current[k]];
      wf *= d.probs_false[current[k]];
    }
    space.weight_t.push_back(wt);
    space.weight_f.push_back(wf);

    std::size_t k = 0;
    for (; k < current.size(); ++k) {
      const auto& d = *net.agents[space.informative[k]].signal;
      if (++current[k] < d.alphabet_size()) break;
      current[k] = 0;
    }
    if (k == current.size()) break;
    if (current.empty()) break;
  }
  return space;
}

}  // namespace

ActionTrace naive_reference_simulate(const Network& net, const WorldState& world, int horizon,
                                     Model model) {
  int n_informative = 0;
  for (const Agent& a : net.agents)
    if (a.signal) {
      n_informative++;
      if (a.signal->alphabet_size() != 2)
        throw CapExceeded("naive oracle handles binary signals only");
    }
  if (n_informative > 12) throw CapExceeded("naive oracle cap is 12 informative agents");

  NaiveSpace space = naive_space(net);
  auto nbrs = net.out_neighbors();
  const std::size_t cfgs = space.configs.size();
  const std::size_t na = net.agents.size();

  // beliefs[t][agent][config], built round by round from the definition:
  // filter every configuration against the observed action history.
  std::vector<std::vector<std::vector<Rational>>> beliefs;
  std::vector<std::vector<std::vector<bool>>> acts;

  std::vector<int> slot(na, -1);
  for (std::size_t k = 0; k < space.informative.size(); ++k)
    slot[space.informative[k]] = static_cast<int>(k);

  for (int t = 0; t <= horizon; ++t) {
    std::vector<std::vector<Rational>> mu_t(na, std::vector<Rational>(cfgs));
    std::vector<std::vector<bool>> act_t(na, std::vector<bool>(cfgs));
    for (std::size_t u = 0; u < na; ++u) {
      for (std::size_t c = 0; c < cfgs; ++c) {
        // Consistent set of configuration c for agent u at time t, from
        // scratch: same own signal, same neighbor actions at all t' < t.
        Rational wt(0), wf(0);
        for (std::size_t d = 0; d < cfgs; ++d) {
          if (slot[u] >= 0 && space.configs[d][slot[u]] != space.configs[c][slot[u]]) continue;
          bool match = true;
          for (int tp = 0; tp < t && match; ++tp)
            for (int v : nbrs[u]) {
              if (model == Model::BinaryAction
                      ? acts[tp][v][d] != acts[tp][v][c]
                      : beliefs[tp][v][d] != beliefs[tp][v][c]) {
                match = false;
                break;
              }
            }
          if (!match) continue;
          wt += space.weight_t[d];
          wf += space.weight_f[d];
        }
        if (wt + wf == 0) {
          // zero-probability configuration; row is never read as a world
          mu_t[u][c] = rat(1, 2);
          act_t[u][c] = false;
          continue;
        }
        mu_t[u][c] = wt / (wt + wf);
        act_t[u][c] = wt > wf;
      }
    }
    beliefs.push_back(std::move(mu_t));
    acts.push_back(std::move(act_t));
  }

  // Locate the requested configuration.
  std::optional<std::size_t> target;
  for (std::size_t c = 0; c < cfgs; ++c) {
    bool match = true;
    for (std::size_t k = 0; k < space.informative.size(); ++k)
      match = match && world.signals[space.informative[k]] == space.configs[c][k];
    if (match) {
      target = c;
      break;
    }
  }
  if (!target) throw BuildError("world state not found");

  ActionTrace trace;
  trace.model = model;
  trace.horizon = horizon;
  for (const Agent& a : net.agents) trace.agent_ids.push_back(a.id);
  trace.actions.resize(na);
  trace.beliefs.resize(na);
  for (std::size_t u = 0; u < na; ++u)
    for (int t = 0; t <= horizon; ++t) {
      trace.actions[u].push_back(acts[t][u][*target]);
      trace.beliefs[u].push_back(beliefs[t][u][*target]);
    }
  return trace;
}

}  // namespace oracle
}  // namespace bayan
