#ifndef BAYAN_FORMULA_HPP
#define BAYAN_FORMULA_HPP

#include <string>
#include <vector>

#include "bayan/rational.hpp"

namespace bayan {

// Variables are 1-based, matching DIMACS.
struct Literal {
  int var = 0;
  bool positive = true;

  bool operator==(const Literal& other) const = default;
};

struct Clause {
  std::vector<Literal> literals;

  bool operator==(const Clause& other) const = default;
};

// CNF formula. Clauses carry one to three literals on distinct variables;
// the 3SAT pipeline accepts any arity in that range so that small-variable
// instances remain expressible.
struct Formula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  bool operator==(const Formula& other) const = default;

  // Empty when well-formed for the given maximum clause arity.
  std::string validate(int max_arity = 3) const;

  bool evaluate(const std::vector<bool>& assignment) const;  // assignment[var-1]
};

enum class Quantifier { Exists, ForAll };

// Prenex quantified formula; blocks ordered outermost first, quantifiers
// strictly alternating, innermost existential.
struct QBF {
  std::vector<std::pair<Quantifier, std::vector<int>>> blocks;
  Formula matrix;

  bool operator==(const QBF& other) const = default;

  std::string validate() const;
};

}  // namespace bayan

#endif
