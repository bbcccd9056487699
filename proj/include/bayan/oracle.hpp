#ifndef BAYAN_ORACLE_HPP
#define BAYAN_ORACLE_HPP

#include <optional>
#include <vector>

#include "bayan/engine.hpp"
#include "bayan/formula.hpp"

// Brute-force reference implementations. These deliberately share no code
// with the engine or the compilers; they exist to certify them.
namespace bayan::oracle {

struct SatResult {
  bool satisfiable = false;
  mpz_class count = 0;
  std::optional<std::vector<bool>> witness;
};

SatResult brute_sat(const Formula& formula);        // N <= 24
bool brute_tqbf(const QBF& qbf);                    // N <= 20
mpz_class count_2sat(const Formula& formula);       // N <= 24

// From-first-principles reimplementation of the dynamics: each agent's
// consistent set is recomputed from the definition every round instead of
// being refined incrementally. Differential-testing partner for
// bayan::simulate. At most 12 informative binary agents.
ActionTrace naive_reference_simulate(const Network& net, const WorldState& world,
                                     int horizon, Model model);

}  // namespace bayan::oracle

#endif
