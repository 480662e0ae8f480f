#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strongsec/process.hpp"
#include "strongsec/term.hpp"

namespace strongsec {

// An encryption with the marker @x exactly once under its plaintext.
struct MarkedCipher {
  Term term;       // fresh variables named by position words, z_{1.2}
  // variables renumbered left to right, renamed binder copies mapped to their source name
  Term canonical;
  int generation = 0;
};

MarkedCipher make_marked(const Term& t, int generation,
                         const std::map<std::string, std::string>& origin = {});

std::optional<Term> prune(const Term& n, const Position& r);
std::optional<std::pair<Term, Position>> f_ep(const Term& u, const Position& p);
std::optional<std::pair<Term, Position>> f_dp(const Term& u, const Position& p);

// D = D1(...Dn(z0)); returns the factors, outermost first, each of the form
// pi-word(dec_g(z0, K)). Absent when d is not such a composition.
std::optional<std::vector<Term>> chain_factors(const Term& d);
Term plug(const Term& context, const Term& t);  // context[z0 -> t]

// The innermost decryption of the factor reduces when plugged with e.
bool meets(const Term& factor, const Term& e);
// meets, and the normal form still contains the marker.
bool reaches_marker(const Term& factor, const Term& e);

Term opener(const Term& e);
TermSet opener_subterm_set(const std::vector<MarkedCipher>& es);

std::vector<MarkedCipher> compute_E0(const MessageSets& m, const std::string& s);
std::vector<Term> compute_Do(const MessageSets& m);
// [E0, E1, ...]; the last generation may be empty or entirely old.
std::vector<std::vector<MarkedCipher>> compute_E_fixpoint(const MessageSets& m,
                                                          const std::string& s);
std::vector<MarkedCipher> flatten(const std::vector<std::vector<MarkedCipher>>& gens);
std::vector<Term> compute_Mts(const MessageSets& m, const std::string& s,
                              const std::vector<MarkedCipher>& all);

// Set equality up to renaming of the fresh variables.
bool same_canonical(const std::vector<MarkedCipher>& a, const std::vector<Term>& b);

}  // namespace strongsec
