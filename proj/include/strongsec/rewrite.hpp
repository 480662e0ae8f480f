#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "strongsec/term.hpp"

namespace strongsec {

enum class Rule : std::uint8_t { Proj1, Proj2, Dec, Deca, Check, Retrieve };

inline constexpr int kNumRules = 6;

struct RuleInfo {
  Rule rule;
  Term lhs;
  Term rhs;
  // Position of the rhs variable inside lhs; empty optional when rhs is the constant ok.
  std::optional<Position> rhs_pos;
};

const std::vector<RuleInfo>& rules();
const RuleInfo& rule_info(Rule r);
const char* rule_name(Rule r);

struct ReductionStep {
  Position redex_position;
  Rule rule;
  Substitution matcher;
};

// Matches the rule applicable at the root of t, if any.
std::optional<Rule> root_rule(const Term& t);
// Contracts the root redex of t. Throws NotARedex if none.
Term contract_root(const Term& t, Rule r, Substitution* matcher = nullptr);

enum class Strategy { LeftmostInnermost, RightmostInnermost, Random };

std::optional<std::pair<Term, ReductionStep>> reduce_once(const Term& t);
std::optional<std::pair<Term, ReductionStep>> reduce_once(const Term& t, Strategy s,
                                                          std::mt19937_64* rng = nullptr);

Term normalize(const Term& t);
// Normal form by repeated single steps; used to test strategy independence.
Term normalize_by_steps(const Term& t, Strategy s, std::mt19937_64* rng = nullptr);
std::vector<ReductionStep> normalization_trace(const Term& t);

bool equal_mod_E(const Term& u, const Term& v);

std::optional<Position> par1(const Term& u, const Position& p, const Position& q);
std::optional<Position> par(const Term& u, const Position& p);
std::optional<Position> par_inv(const Term& u, const Position& p);

}  // namespace strongsec
