#include "bayan/gadgets.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bayan {

SignalDistribution distribution_from_ratios(const std::optional<Rational>& lambda0,
                                            const std::optional<Rational>& lambda1) {
  if (lambda0 && lambda1) {
    // p_T/p_F = l1, (1-p_T)/(1-p_F) = l0.
    if (!(*lambda0 < 1 && 1 < *lambda1))
      throw BuildError("infeasible ratio pair: need lambda0 < 1 < lambda1");
    Rational den = *lambda1 - *lambda0;
    Rational p_true = Rational(*lambda1 * (1 - *lambda0)) / den;
    Rational p_false = Rational(1 - *lambda0) / den;
    return SignalDistribution::binary(p_true, p_false);
  }
  if (lambda0) {
    if (!(*lambda0 > 0 && *lambda0 < 1))
      throw BuildError("infeasible pinned lambda0 (need 0 < lambda0 < 1)");
    return SignalDistribution::binary(Rational(1 - *lambda0 / 2), rat(1, 2));
  }
  if (lambda1) {
    if (!(*lambda1 > 1)) throw BuildError("infeasible pinned lambda1 (need lambda1 > 1)");
    return SignalDistribution::binary(rat(1, 2), Rational(1 / (2 * *lambda1)));
  }
  throw BuildError("no ratio specified");
}

std::pair<SignalDistribution, int> pinned_from_ratio(const Rational& ratio) {
  if (ratio <= 0) throw BuildError("ratio must be positive");
  if (ratio == 1) throw BuildError("ratio 1 carries no information");
  if (ratio > 1) return {distribution_from_ratios(std::nullopt, ratio), 1};
  return {distribution_from_ratios(ratio, std::nullopt), 0};
}

Rational choose_separator(const Rational& lo, const Rational& hi,
                          const std::optional<Rational>& prob_floor) {
  if (!(lo < hi)) throw BuildError("separator bounds not ordered");
  Rational sep = Rational(lo + hi) / 2;
  if (sep == 1) sep = Rational(1 + hi) / 2;  // keep the auxiliary pair informative
  if (prob_floor) {
    // Auxiliary agents carry ratios sep and 1/sep with the free side at
    // probability 1/2, so their smallest probability is 1/(2 max(sep,1/sep)).
    auto min_prob = [](const Rational& s) {
      Rational m = s > 1 ? s : Rational(1 / s);
      return Rational(1 / (2 * m));
    };
    if (min_prob(sep) < *prob_floor) {
      Rational pulled = sep;
      if (lo >= 1)
        pulled = std::min(sep, Rational(2 * lo));
      else if (hi <= 1)
        pulled = std::max(sep, Rational(hi / 2));
      else if (sep > 2)
        pulled = rat(2);
      else if (sep < rat(1, 2))
        pulled = rat(1, 2);
      if (pulled != 1) sep = pulled;
    }
  }
  if (!(lo < sep && sep < hi)) throw BuildError("separator left its interval");
  return sep;
}

// ---------------------------------------------------------------------------
// Assembly

int Assembly::add_informative(const std::string& id, SignalDistribution dist,
                              const std::string& prov_kind, const std::string& prov_src) {
  Agent a{id, std::move(dist), 0};
  int idx = net_.add_agent(std::move(a));
  sig_[id] = 0;
  if (!prov_kind.empty()) provenance_[id] = {prov_kind, prov_src};
  return idx;
}

int Assembly::add_relay(const std::string& id, int sig_time, const std::string& prov_kind,
                        const std::string& prov_src) {
  Agent a{id, std::nullopt, sig_time};
  int idx = net_.add_agent(std::move(a));
  sig_[id] = sig_time;
  if (!prov_kind.empty()) provenance_[id] = {prov_kind, prov_src};
  return idx;
}

int Assembly::sig_time(const std::string& id) const {
  auto it = sig_.find(id);
  if (it == sig_.end()) throw BuildError("unknown agent '" + id + "'");
  return it->second;
}

Assembly::Designation Assembly::relay_designation(const std::string& target) const {
  auto it = designated_.find(target);
  if (it == designated_.end()) return {};
  Designation d = it->second;
  d.signal.reset();  // relays broadcast, they do not hold the signal
  return d;
}

std::string Assembly::tap(const std::string& target, int height) {
  if (height == 0) return target;
  auto& chain = spine_[target];
  while (static_cast<int>(chain.size()) < height) {
    int h = static_cast<int>(chain.size()) + 1;
    std::string below = h == 1 ? target : chain[h - 2];
    std::string id = target + ".r" + std::to_string(h);
    add_relay(id, sig_time(target) + h, "relay", target);
    net_.add_edge(id, below);
    if (designated_.count(target)) {
      Designation d = relay_designation(target);
      designated_[id] = d;
    }
    chain.push_back(id);
  }
  return chain[height - 1];
}

void Assembly::observe(const std::string& observer, const std::string& target) {
  int gap = sig_time(observer) - 1 - sig_time(target);
  if (gap < 0)
    throw BuildError("'" + observer + "' cannot observe '" + target +
                     "': significant time would be violated");
  net_.add_edge(observer, tap(target, gap));
}

void Assembly::designate_signal(const std::string& id, int signal) {
  const Agent& agent = net_.agent(id);
  if (!agent.signal) throw BuildError("cannot designate a signal on relay '" + id + "'");
  const SignalDistribution& d = *agent.signal;
  if (signal < 0 || signal >= d.alphabet_size())
    throw BuildError("designated signal out of alphabet");
  Rational pt = d.probs_true[signal], pf = d.probs_false[signal];
  if (pt + pf == 0) throw BuildError("designated signal has probability 0");
  Designation des;
  des.mu = pt / (pt + pf);
  des.action = des.mu > rat(1, 2);
  des.is_action = true;
  des.signal = signal;
  designated_[id] = des;
}

void Assembly::designate_relay_action(const std::string& id, bool action) {
  Designation des;
  des.is_action = true;
  des.action = action;
  des.mu = rat(1, 2);  // placeholder; binary model only reads the action
  designated_[id] = des;
}

void Assembly::designate_relay_belief(const std::string& id, const Rational& mu) {
  Designation des;
  des.mu = mu;
  des.action = mu > rat(1, 2);
  des.is_action = true;
  designated_[id] = des;
}

bool Assembly::has_designation(const std::string& id) const { return designated_.count(id) > 0; }

std::optional<int> Assembly::forced_signal(const std::string& id) const {
  auto it = designated_.find(id);
  if (it == designated_.end()) return std::nullopt;
  return it->second.signal;
}

ObservationHistory Assembly::designated_history(const std::string& observer,
                                                int query_time) const {
  ObservationHistory hist;
  hist.observer_id = observer;
  int obs = net_.require(observer);
  for (const auto& e : net_.edges) {
    if (e.first != obs) continue;
    const std::string& vid = net_.agents[e.second].id;
    auto it = designated_.find(vid);
    if (it == designated_.end())
      throw BuildError("neighbor '" + vid + "' of '" + observer + "' carries no designation");
    int vsig = sig_time(vid);
    for (int t = 0; t < query_time; ++t) {
      if (model_ == Model::BinaryAction) {
        bool act = t >= vsig ? it->second.action : false;
        hist.binary_entries[{vid, t}] = act;
      } else {
        Rational mu = t >= vsig ? it->second.mu : rat(1, 2);
        hist.belief_entries[{vid, t}] = mu;
      }
    }
  }
  return hist;
}

// ---------------------------------------------------------------------------
// Threshold and counting builders

namespace {

std::vector<std::pair<std::vector<int>, Rational>> target_products(
    const std::vector<Target>& targets) {
  std::vector<std::pair<std::vector<int>, Rational>> out;
  std::vector<int> tuple(targets.size(), 0);
  while (true) {
    Rational prod(1);
    for (std::size_t i = 0; i < targets.size(); ++i)
      prod *= targets[i].dist.ratio(tuple[i]);
    out.emplace_back(tuple, prod);
    std::size_t i = 0;
    for (; i < tuple.size(); ++i) {
      if (++tuple[i] < targets[i].dist.alphabet_size()) break;
      tuple[i] = 0;
    }
    if (i == tuple.size()) break;
    if (tuple.empty()) break;
  }
  return out;
}

}  // namespace

GadgetInstance build_threshold(Assembly& a, const std::string& name,
                               const std::vector<Target>& targets, const SeparatorChoice& sep,
                               bool trim) {
  if (targets.empty()) throw BuildError("threshold gadget needs targets");
  const Rational& R = sep.ratio_threshold;
  if (R <= 0) throw BuildError("separator must be positive");

  bool achievable = false;
  for (const auto& [tuple, prod] : target_products(targets)) achievable |= prod == R;
  if (achievable && sep.direction == SeparatorChoice::Direction::Less)
    throw BuildError("non-separating separator for a less-direction threshold");

  GadgetInstance g;
  g.name = name;
  g.claim = ThresholdClaim{targets, sep};

  int max_target_sig = 0;
  for (const auto& t : targets) max_target_sig = std::max(max_target_sig, a.sig_time(t.id));

  std::string b_id = name + ".B";
  bool have_aux = R != 1;
  if (have_aux) {
    auto [dist, revealed] = pinned_from_ratio(Rational(1 / R));
    a.add_informative(b_id, dist, "threshold", name);
    a.designate_signal(b_id, revealed);
    g.agents.push_back(b_id);
    g.forced_signals[b_id] = revealed;
  }

  std::string sum_id = name + ".A";
  a.add_relay(sum_id, max_target_sig + 1, "threshold", name);
  for (const auto& t : targets) a.observe(sum_id, t.id);
  if (have_aux) a.observe(sum_id, b_id);
  a.designate_relay_action(sum_id, sep.direction == SeparatorChoice::Direction::Greater);
  g.agents.push_back(sum_id);
  g.observer_attach.push_back(sum_id);
  if (have_aux) g.observer_attach.push_back(b_id);

  if (have_aux && !trim) {
    std::string c_id = name + ".C";
    auto [dist, revealed] = pinned_from_ratio(R);
    a.add_informative(c_id, dist, "threshold", name);
    a.designate_signal(c_id, revealed);
    g.agents.push_back(c_id);
    g.forced_signals[c_id] = revealed;
    g.observer_attach.push_back(c_id);

    const auto& bd = *a.net().agent(b_id).signal;
    const auto& cd = *a.net().agent(c_id).signal;
    int sb = g.forced_signals[b_id], sc = revealed;
    Rational alpha_t = bd.probs_true[sb] * cd.probs_true[sc];
    Rational alpha_f = bd.probs_false[sb] * cd.probs_false[sc];
    if (alpha_t != alpha_f) throw BuildError("compensating pair failed to equalize");
    g.equalization_factor = alpha_t;
  } else if (!have_aux) {
    g.equalization_factor = rat(1);
  }
  return g;
}

GadgetInstance build_counting(Assembly& a, const std::string& name,
                              const std::vector<Target>& targets, int k,
                              CountingClaim::Mode mode, bool with_equalizer,
                              const std::optional<Rational>& prob_floor, bool trim) {
  const int K = static_cast<int>(targets.size());
  if (K == 0) throw BuildError("counting gadget needs targets");
  if (k < 0 || k > K) throw BuildError("infeasible k");
  for (const auto& t : targets) {
    if (t.dist.alphabet_size() != 2) throw BuildError("counting targets must be binary");
    if (!(t.dist == targets[0].dist)) throw BuildError("non-shared distributions");
  }
  if (with_equalizer && mode != CountingClaim::Mode::Exactly)
    throw BuildError("equalizer requires exactly mode");

  Rational l0 = targets[0].dist.ratio(0), l1 = targets[0].dist.ratio(1);
  if (!(l0 < 1 && 1 < l1)) throw BuildError("counting targets must be informative");
  auto rho = [&](int j) { return Rational(rat_pow(l0, K - j) * rat_pow(l1, j)); };

  GadgetInstance g;
  g.name = name;
  CountingClaim claim{targets, k, mode, with_equalizer && !trim, {}};

  auto add_thresh = [&](const std::string& sub, const Rational& lo, const Rational& hi,
                        SeparatorChoice::Direction dir) {
    SeparatorChoice sc{choose_separator(lo, hi, prob_floor), dir};
    GadgetInstance part = build_threshold(a, name + sub, targets, sc, trim);
    g.agents.insert(g.agents.end(), part.agents.begin(), part.agents.end());
    g.observer_attach.insert(g.observer_attach.end(), part.observer_attach.begin(),
                             part.observer_attach.end());
    for (auto& [id, s] : part.forced_signals) g.forced_signals[id] = s;
    claim.seps.push_back(sc);
  };

  bool lower = (mode == CountingClaim::Mode::Exactly && k > 0) ||
               (mode == CountingClaim::Mode::AtLeast && k > 0);
  bool upper = (mode == CountingClaim::Mode::Exactly && k < K) ||
               (mode == CountingClaim::Mode::AtMost && k < K);
  if (lower) add_thresh(".lo", rho(k - 1), rho(k), SeparatorChoice::Direction::Greater);
  if (upper) add_thresh(".hi", rho(k), rho(k + 1), SeparatorChoice::Direction::Less);

  if (with_equalizer && !trim) {
    Rational eq_ratio = Rational(1 / rho(k));
    if (eq_ratio != 1) {
      std::string eq_id = name + ".EQ";
      auto [dist, revealed] = pinned_from_ratio(eq_ratio);
      a.add_informative(eq_id, dist, "equalizer", name);
      a.designate_signal(eq_id, revealed);
      g.agents.push_back(eq_id);
      g.forced_signals[eq_id] = revealed;
      g.observer_attach.push_back(eq_id);
    }
    // beta: the joint weight of any consistent full configuration.
    Rational beta_t = rat_pow(targets[0].dist.probs_true[1], k) *
                      rat_pow(targets[0].dist.probs_true[0], K - k);
    Rational beta_f = rat_pow(targets[0].dist.probs_false[1], k) *
                      rat_pow(targets[0].dist.probs_false[0], K - k);
    for (const auto& [id, s] : g.forced_signals) {
      const auto& d = *a.net().agent(id).signal;
      beta_t *= d.probs_true[s];
      beta_f *= d.probs_false[s];
    }
    if (beta_t != beta_f) throw BuildError("equalized counting gadget is state-dependent");
    g.equalization_factor = beta_t;
  }
  g.claim = std::move(claim);
  return g;
}

GadgetInstance build_not_equal(Assembly& a, const std::string& name, const Target& u,
                               const Target& v, const std::optional<Rational>& prob_floor,
                               bool trim) {
  for (const Target* t : {&u, &v})
    if (t->dist.alphabet_size() != 2 || !t->dist.informative())
      throw BuildError("not-equal targets must be binary informative");
  Rational pl = u.dist.ratio(0) * v.dist.ratio(0);
  Rational m1 = u.dist.ratio(0) * v.dist.ratio(1);
  Rational m2 = u.dist.ratio(1) * v.dist.ratio(0);
  Rational ph = u.dist.ratio(1) * v.dist.ratio(1);
  Rational mixed_lo = std::min(m1, m2), mixed_hi = std::max(m1, m2);

  GadgetInstance g;
  g.name = name;
  NotEqualClaim claim{u, v, {}};
  std::vector<Target> targets{u, v};

  SeparatorChoice lo{choose_separator(pl, mixed_lo, prob_floor),
                     SeparatorChoice::Direction::Greater};
  SeparatorChoice hi{choose_separator(mixed_hi, ph, prob_floor),
                     SeparatorChoice::Direction::Less};
  for (const auto& [sub, sc] : {std::pair{std::string(".lo"), lo}, {std::string(".hi"), hi}}) {
    GadgetInstance part = build_threshold(a, name + sub, targets, sc, trim);
    g.agents.insert(g.agents.end(), part.agents.begin(), part.agents.end());
    g.observer_attach.insert(g.observer_attach.end(), part.observer_attach.begin(),
                             part.observer_attach.end());
    for (auto& [id, s] : part.forced_signals) g.forced_signals[id] = s;
    claim.seps.push_back(sc);
  }
  g.claim = std::move(claim);
  return g;
}

GadgetInstance build_clause(Assembly& a, const std::string& name,
                            const std::vector<std::string>& literal_ids,
                            const std::string& eval_id, const SignalDistribution& dist,
                            const std::optional<Rational>& prob_floor, bool trim) {
  if (literal_ids.empty() || literal_ids.size() > 3)
    throw BuildError("clause gadget takes one to three literals");
  std::set<std::string> distinct(literal_ids.begin(), literal_ids.end());
  if (distinct.size() != literal_ids.size()) throw BuildError("duplicate-variable clause");

  std::vector<Target> targets;
  for (const auto& id : literal_ids) targets.push_back({id, dist});
  targets.push_back({eval_id, dist});
  return build_counting(a, name, targets, 1, CountingClaim::Mode::AtLeast, false, prob_floor,
                        trim);
}

// ---------------------------------------------------------------------------
// Revealed-belief gadgets

SignalDistribution rb_common_distribution() {
  return SignalDistribution::binary(rat(3, 4), rat(1, 4));
}

SignalDistribution rb_ternary_distribution() {
  return SignalDistribution::ternary({rat(1, 13), rat(3, 13), rat(9, 13)},
                                     {rat(9, 13), rat(3, 13), rat(1, 13)});
}

namespace {

// Broadcaster pair: a relay observing `seen` with the given designated
// odds, plus (when the odds differ from 1) the compensating informative
// agent broadcasting the inverse.
void rb_pair(Assembly& a, GadgetInstance& g, const std::string& name,
             const std::vector<std::string>& seen, const Rational& odds) {
  std::string sum_id = name + ".sum";
  int max_sig = 0;
  for (const auto& id : seen) max_sig = std::max(max_sig, a.sig_time(id));
  a.add_relay(sum_id, max_sig + 1, "rb", name);
  for (const auto& id : seen) a.observe(sum_id, id);
  a.designate_relay_belief(sum_id, mu_from_odds(odds));
  g.agents.push_back(sum_id);
  g.observer_attach.push_back(sum_id);

  std::string inv_id = name + ".inv";
  if (odds != 1) {
    auto [dist, revealed] = pinned_from_ratio(Rational(1 / odds));
    a.add_informative(inv_id, dist, "rb", name);
    a.designate_signal(inv_id, revealed);
    g.forced_signals[inv_id] = revealed;
  } else {
    // The inverse broadcast would carry ratio 1; an uninformative leaf
    // broadcasts exactly that.
    a.add_relay(inv_id, 0, "rb", name);
    a.designate_relay_belief(inv_id, rat(1, 2));
  }
  g.agents.push_back(inv_id);
  g.observer_attach.push_back(inv_id);
}

}  // namespace

GadgetInstance build_rb_variable(Assembly& a, const std::string& name, const std::string& x_id,
                                 const std::string& notx_id, const SignalDistribution& dist) {
  GadgetInstance g;
  g.name = name;
  Rational odds = dist.ratio(0) * dist.ratio(1);
  rb_pair(a, g, name, {x_id, notx_id}, odds);
  g.claim = RbClaim{RbClaim::Kind::Variable, {{x_id, dist}, {notx_id, dist}}, odds};
  return g;
}

GadgetInstance build_rb_clause(Assembly& a, const std::string& name, const std::string& lit_a,
                               const std::string& lit_b, const std::string& e_id,
                               const std::string& eval_id, const SignalDistribution& dist,
                               const SignalDistribution& e_dist) {
  if (lit_a == lit_b) throw BuildError("duplicate-variable clause");
  Rational step = dist.ratio(1) / dist.ratio(0);
  if (e_dist.alphabet_size() != 3) throw BuildError("clause companion must be ternary");
  if (e_dist.ratio(1) != e_dist.ratio(0) * step || e_dist.ratio(2) != e_dist.ratio(1) * step)
    throw BuildError("ternary ratios must step by lambda1/lambda0");

  GadgetInstance g;
  g.name = name;
  // 3 l0 + m0 + 3D in ratio space.
  Rational odds = rat_pow(dist.ratio(0), 3) * e_dist.ratio(0) * rat_pow(step, 3);
  std::string sum_id = name + ".sum";
  a.add_relay(sum_id, 1, "rb-clause", name);
  for (const auto& id : {lit_a, lit_b, e_id, eval_id}) a.observe(sum_id, id);
  a.designate_relay_belief(sum_id, mu_from_odds(odds));
  g.agents.push_back(sum_id);
  g.observer_attach.push_back(sum_id);
  g.claim = RbClaim{RbClaim::Kind::Clause,
                    {{lit_a, dist}, {lit_b, dist}, {e_id, e_dist}, {eval_id, dist}},
                    odds};
  return g;
}

GadgetInstance build_rb_neutralizer_e(Assembly& a, const std::string& name,
                                      const std::string& e_id,
                                      const SignalDistribution& e_dist) {
  GadgetInstance g;
  g.name = name;
  std::string twin_id = name + ".twin";
  a.add_informative(twin_id, e_dist, "rb-neutralizer", name);
  g.agents.push_back(twin_id);
  Rational odds = e_dist.ratio(1) * e_dist.ratio(1);  // 2 m0 + 2D
  rb_pair(a, g, name, {e_id, twin_id}, odds);
  g.claim = RbClaim{RbClaim::Kind::NeutralizerE, {{e_id, e_dist}, {twin_id, e_dist}}, odds};
  return g;
}

GadgetInstance build_rb_neutralizer_eval(Assembly& a, const std::string& name,
                                         const std::string& eval_id,
                                         const SignalDistribution& dist) {
  GadgetInstance g;
  g.name = name;
  std::string twin_id = name + ".twin";
  a.add_informative(twin_id, dist, "rb-neutralizer", name);
  g.agents.push_back(twin_id);
  Rational odds = dist.ratio(0) * dist.ratio(1);
  rb_pair(a, g, name, {eval_id, twin_id}, odds);
  g.claim = RbClaim{RbClaim::Kind::NeutralizerEval, {{eval_id, dist}, {twin_id, dist}}, odds};
  return g;
}

GadgetInstance build_rb_amplifier_pair(Assembly& a, const std::string& name,
                                       const std::string& eval_id,
                                       const SignalDistribution& dist) {
  GadgetInstance g;
  g.name = name;
  std::string a_id = name + ".A";
  a.add_informative(a_id, dist, "rb-amplifier", name);
  g.agents.push_back(a_id);

  std::string sum_id = name + ".sum";
  a.add_relay(sum_id, 1, "rb-amplifier", name);
  a.observe(sum_id, eval_id);
  a.observe(sum_id, a_id);
  Rational odds = dist.ratio(0) * dist.ratio(1);
  a.designate_relay_belief(sum_id, mu_from_odds(odds));
  g.agents.push_back(sum_id);
  g.observer_attach.push_back(sum_id);
  g.claim = RbClaim{RbClaim::Kind::Amplifier, {{eval_id, dist}, {a_id, dist}}, odds};
  return g;
}

// ---------------------------------------------------------------------------
// Claim verification

bool ClaimReport::all_pass() const {
  for (const auto& item : items)
    if (!item.pass) return false;
  return true;
}

std::string ClaimReport::summary() const {
  std::ostringstream out;
  for (const auto& item : items) {
    out << (item.pass ? "PASS " : "FAIL ") << item.name;
    if (!item.detail.empty()) out << ": " << item.detail;
    out << "\n";
  }
  return out.str();
}

namespace {

std::string tuple_str(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

struct ConsistentSets {
  std::set<std::vector<int>> target_tuples;
  // target tuple -> distinct auxiliary extensions seen
  std::map<std::vector<int>, std::set<std::vector<int>>> extensions;
  // 2 * prior weight of each consistent state, keyed by theta
  std::vector<Rational> weights_t, weights_f;
};

ConsistentSets enumerate_consistent(const Assembly& host, const Engine& engine,
                                    const std::vector<std::string>& target_ids,
                                    const std::vector<std::string>& aux_ids, int query_time) {
  const std::string observer = *host.net().designated_observer;
  auto hist = host.designated_history(observer, query_time);
  auto states = engine.consistent_states(hist, query_time);

  std::vector<int> tgt_idx, aux_idx;
  for (const auto& id : target_ids) tgt_idx.push_back(engine.net().require(id));
  for (const auto& id : aux_ids) aux_idx.push_back(engine.net().require(id));

  ConsistentSets out;
  for (std::size_t w : states) {
    const WorldState& ws = engine.worlds().states[w];
    std::vector<int> tup, ext;
    for (int i : tgt_idx) tup.push_back(ws.signals[i]);
    for (int i : aux_idx) ext.push_back(ws.signals[i]);
    out.target_tuples.insert(tup);
    out.extensions[tup].insert(ext);
    Rational scaled = engine.worlds().weights[w] * 2;
    (ws.theta_true ? out.weights_t : out.weights_f).push_back(scaled);
  }
  return out;
}

void check_set_equality(ClaimReport& report, const std::string& name,
                        const std::set<std::vector<int>>& expected,
                        const std::set<std::vector<int>>& actual) {
  if (expected == actual) {
    report.items.push_back({name, true,
                            std::to_string(actual.size()) + " consistent configuration(s)"});
    return;
  }
  std::string detail = "expected {";
  for (const auto& t : expected) detail += tuple_str(t);
  detail += "} got {";
  for (const auto& t : actual) detail += tuple_str(t);
  detail += "}";
  report.items.push_back({name, false, detail});
}

void check_uniqueness(ClaimReport& report, const ConsistentSets& sets) {
  for (const auto& [tup, exts] : sets.extensions) {
    if (exts.size() != 1) {
      report.items.push_back({"unique-extension", false,
                              "configuration " + tuple_str(tup) + " has " +
                                  std::to_string(exts.size()) + " auxiliary extensions"});
      return;
    }
  }
  report.items.push_back({"unique-extension", true, ""});
}

void check_strict_separation(ClaimReport& report, const std::vector<Target>& targets,
                             const SeparatorChoice& sep, const std::string& label) {
  for (const auto& [tuple, prod] : target_products(targets)) {
    if (prod == sep.ratio_threshold) {
      report.items.push_back({label, false,
                              "non-strict separation: configuration " + tuple_str(tuple) +
                                  " achieves the separator exactly"});
      return;
    }
  }
  report.items.push_back({label, true, ""});
}

void check_threshold(const Assembly& host, const Engine& engine, const GadgetInstance& g,
                     const ThresholdClaim& claim, int query_time, ClaimReport& report) {
  std::vector<std::string> target_ids, aux_ids;
  for (const auto& t : claim.targets) target_ids.push_back(t.id);
  for (const auto& [id, s] : g.forced_signals) aux_ids.push_back(id);
  auto sets = enumerate_consistent(host, engine, target_ids, aux_ids, query_time);

  std::set<std::vector<int>> expected;
  for (const auto& [tuple, prod] : target_products(claim.targets)) {
    bool in = claim.sep.direction == SeparatorChoice::Direction::Greater
                  ? prod > claim.sep.ratio_threshold
                  : prod < claim.sep.ratio_threshold;
    if (in) expected.insert(tuple);
  }
  check_set_equality(report, "consistent-set", expected, sets.target_tuples);
  check_uniqueness(report, sets);
  check_strict_separation(report, claim.targets, claim.sep, "strict-separation");

  if (g.equalization_factor) {
    Rational at(1), af(1);
    for (const auto& [id, s] : g.forced_signals) {
      const auto& d = *host.net().agent(id).signal;
      at *= d.probs_true[s];
      af *= d.probs_false[s];
    }
    bool ok = at == af && at == *g.equalization_factor;
    report.items.push_back({"equalization", ok,
                            ok ? "alpha = " + rational_str(at)
                               : "auxiliary factor depends on the state"});
  }
}

void check_counting(const Assembly& host, const Engine& engine, const GadgetInstance& g,
                    const CountingClaim& claim, int query_time, ClaimReport& report) {
  std::vector<std::string> target_ids, aux_ids;
  for (const auto& t : claim.targets) target_ids.push_back(t.id);
  for (const auto& [id, s] : g.forced_signals) aux_ids.push_back(id);
  auto sets = enumerate_consistent(host, engine, target_ids, aux_ids, query_time);

  std::set<std::vector<int>> expected;
  for (const auto& [tuple, prod] : target_products(claim.targets)) {
    int ones = 0;
    for (int s : tuple) ones += s;
    bool in = claim.mode == CountingClaim::Mode::Exactly   ? ones == claim.k
              : claim.mode == CountingClaim::Mode::AtLeast ? ones >= claim.k
                                                           : ones <= claim.k;
    if (in) expected.insert(tuple);
  }
  check_set_equality(report, "consistent-set", expected, sets.target_tuples);
  check_uniqueness(report, sets);
  for (std::size_t i = 0; i < claim.seps.size(); ++i)
    check_strict_separation(report, claim.targets, claim.seps[i],
                            "strict-separation." + std::to_string(i));

  if (claim.equalized) {
    std::set<Rational> values;
    for (const auto& w : sets.weights_t) values.insert(w);
    for (const auto& w : sets.weights_f) values.insert(w);
    bool ok = values.size() == 1 &&
              (!g.equalization_factor || *values.begin() == *g.equalization_factor);
    report.items.push_back({"beta-state-independence", ok,
                            ok ? "beta = " + rational_str(*values.begin())
                               : std::to_string(values.size()) + " distinct weights"});
  }
}

void check_not_equal(const Assembly& host, const Engine& engine, const GadgetInstance& g,
                     const NotEqualClaim& claim, int query_time, ClaimReport& report) {
  std::vector<std::string> aux_ids;
  for (const auto& [id, s] : g.forced_signals) aux_ids.push_back(id);
  auto sets =
      enumerate_consistent(host, engine, {claim.u.id, claim.v.id}, aux_ids, query_time);
  std::set<std::vector<int>> expected{{0, 1}, {1, 0}};
  check_set_equality(report, "consistent-set", expected, sets.target_tuples);
  check_uniqueness(report, sets);
  std::vector<Target> targets{claim.u, claim.v};
  for (std::size_t i = 0; i < claim.seps.size(); ++i)
    check_strict_separation(report, targets, claim.seps[i],
                            "strict-separation." + std::to_string(i));
}

void check_rb(const Assembly& host, const Engine& engine, const GadgetInstance& g,
              const RbClaim& claim, int query_time, ClaimReport& report) {
  std::vector<std::string> target_ids, aux_ids;
  for (const auto& t : claim.targets) target_ids.push_back(t.id);
  for (const auto& [id, s] : g.forced_signals) aux_ids.push_back(id);
  auto sets = enumerate_consistent(host, engine, target_ids, aux_ids, query_time);

  std::set<std::vector<int>> expected;
  for (const auto& [tuple, prod] : target_products(claim.targets)) {
    bool in = false;
    switch (claim.kind) {
      case RbClaim::Kind::Variable:
      case RbClaim::Kind::NeutralizerEval:
      case RbClaim::Kind::Amplifier:
        in = tuple[0] + tuple[1] == 1;
        break;
      case RbClaim::Kind::NeutralizerE:
        in = tuple[0] + tuple[1] == 2;
        break;
      case RbClaim::Kind::Clause:
        in = tuple[0] + tuple[1] + tuple[2] + tuple[3] == 3;
        break;
    }
    if (in) expected.insert(tuple);
  }
  check_set_equality(report, "consistent-set", expected, sets.target_tuples);
  check_uniqueness(report, sets);

  if (claim.kind == RbClaim::Kind::NeutralizerE) {
    // The ternary family must make every complementary pair equally likely
    // in both states of the world.
    const auto& d = claim.targets[0].dist;
    bool ok = d.probs_true[2] * d.probs_true[0] == d.probs_true[1] * d.probs_true[1] &&
              d.probs_false[2] * d.probs_false[0] == d.probs_false[1] * d.probs_false[1] &&
              d.probs_true[1] == d.probs_false[1];
    report.items.push_back({"pair-weight-identity", ok, ok ? "" : "q(.,2)q(.,0) != q(.,1)^2"});
    std::set<Rational> values;
    for (const auto& w : sets.weights_t) values.insert(w);
    for (const auto& w : sets.weights_f) values.insert(w);
    report.items.push_back({"pair-weight-state-independence", values.size() == 1,
                            std::to_string(values.size()) + " distinct weights"});
  }
}

void check_coupler(const Assembly& host, const Engine& engine, const GadgetInstance& g,
                   const CouplerTripleClaim& claim, int query_time, ClaimReport& report) {
  std::vector<std::string> target_ids{claim.f_id, claim.c_id, claim.d_id, claim.e_id};
  std::vector<std::string> aux_ids;
  for (const auto& [id, s] : g.forced_signals) aux_ids.push_back(id);
  auto sets = enumerate_consistent(host, engine, target_ids, aux_ids, query_time);
  // S(F) = S(D) != S(C) = S(E)
  std::set<std::vector<int>> expected{{0, 1, 0, 1}, {1, 0, 1, 0}};
  check_set_equality(report, "consistent-pattern", expected, sets.target_tuples);
  check_uniqueness(report, sets);
}

}  // namespace

ClaimReport check_gadget_claim(const Assembly& host, const GadgetInstance& gadget,
                               std::uint64_t cap) {
  ClaimReport report;
  if (!host.net().designated_observer) {
    report.items.push_back({"host", false, "host has no designated observer"});
    return report;
  }
  const std::string observer = *host.net().designated_observer;
  int query_time = host.sig_time(observer);
  Engine engine(host.net(), host.model(), query_time > 0 ? query_time - 1 : 0, cap);

  if (auto* c = std::get_if<ThresholdClaim>(&gadget.claim))
    check_threshold(host, engine, gadget, *c, query_time, report);
  else if (auto* c = std::get_if<CountingClaim>(&gadget.claim))
    check_counting(host, engine, gadget, *c, query_time, report);
  else if (auto* c = std::get_if<NotEqualClaim>(&gadget.claim))
    check_not_equal(host, engine, gadget, *c, query_time, report);
  else if (auto* c = std::get_if<RbClaim>(&gadget.claim))
    check_rb(host, engine, gadget, *c, query_time, report);
  else if (auto* c = std::get_if<CouplerTripleClaim>(&gadget.claim))
    check_coupler(host, engine, gadget, *c, query_time, report);
  else
    report.items.push_back({"claim", false, "gadget carries no checkable claim"});
  return report;
}

}  // namespace bayan
