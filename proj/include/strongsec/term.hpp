#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace strongsec {

enum class Sym : std::uint8_t {
  Enc,
  Dec,
  Enca,
  Deca,
  Pub,
  Priv,
  Pair,
  Proj1,
  Proj2,
  Sign,
  Check,
  Retrieve,
};

inline constexpr int kNumSyms = 12;

int arity(Sym f);
bool is_constructor(Sym f);
bool is_destructor(Sym f);
// enc_g / dec_g: either kind of encryption or decryption.
inline bool is_encryption(Sym f) { return f == Sym::Enc || f == Sym::Enca; }
inline bool is_decryption(Sym f) { return f == Sym::Dec || f == Sym::Deca; }
const char* sym_name(Sym f);
std::optional<Sym> sym_from_name(std::string_view s);

enum class Kind : std::uint8_t { App, Name, Var };

class Node;

// Immutable term handle. Copying is a refcount bump; equality is structural.
class Term {
 public:
  Term() = default;

  static Term name(std::string id);
  static Term var(std::string id);
  static Term app(Sym f, std::vector<Term> args);
  static Term app(Sym f, Term a);
  static Term app(Sym f, Term a, Term b);
  static Term app(Sym f, Term a, Term b, Term c);

  bool valid() const { return static_cast<bool>(node_); }
  Kind kind() const;
  bool is_name() const { return kind() == Kind::Name; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_app(Sym f) const { return is_app() && sym() == f; }
  Sym sym() const;
  const std::string& id() const;
  const std::vector<Term>& args() const;
  const Term& arg(int i) const { return args()[static_cast<size_t>(i - 1)]; }
  std::size_t hash() const;
  int size() const;
  // A leaf has depth 1.
  int depth() const;
  bool ground() const;
  // True iff no rewrite rule applies anywhere in the term.
  bool normal() const;

  const Node* raw() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  // Total order: size, then kind, symbol, id, children. Used for canonical output.
  friend bool operator<(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

class Node {
 public:
  Kind kind;
  Sym sym = Sym::Pair;
  std::string id;
  std::vector<Term> args;
  std::size_t hash = 0;
  int size = 1;
  int depth = 1;
  bool ground = true;
  bool normal = true;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using TermSet = std::set<Term>;

// Reserved variables of the secrecy analysis: the marker and the hole of destructor chains.
inline const std::string kMarker = "@x";
inline const std::string kHole = "@z0";
Term marker();
Term hole();

// ---- positions ----

using Position = std::vector<int>;

bool is_prefix(const Position& q, const Position& p);
std::optional<Position> minus(const Position& p, const Position& q);
Position concat(const Position& a, const Position& b);
std::string position_string(const Position& p, bool unicode = false);
Position parse_position(std::string_view s);

Term subterm_at(const Term& t, const Position& p);
bool has_position(const Term& t, const Position& p);
Term replace_at(const Term& u, const Position& p, const Term& v);
std::vector<Position> positions(const Term& t);
std::vector<Position> var_positions(const Term& t);
std::vector<Position> nonvar_positions(const Term& t);

// ---- structure ----

using Substitution = std::map<std::string, Term>;

Term substitute(const Substitution& sigma, const Term& t);
// t[s -> m] for a name s.
Term replace_name(const Term& t, const std::string& s, const Term& m);
Term rename_names(const Term& t, const std::map<std::string, std::string>& ren);

std::set<std::string> free_names(const Term& t);
std::set<std::string> variables(const Term& t);
bool occurs_name(const Term& t, const std::string& s);
bool occurs_var(const Term& t, const std::string& v);
bool occurs_sym(const Term& t, Sym f);
bool is_subterm(const Term& v, const Term& u);
bool is_strict_subterm(const Term& v, const Term& u);
void collect_subterms(const Term& t, TermSet& out);

struct Head {
  Kind kind;
  Sym sym;
  std::string id;
};
Head head(const Term& t);

bool is_public(const Term& t, const std::set<std::string>& restricted);

// ---- text ----

enum class Style { Ascii, Unicode };

std::string to_string(const Term& t, Style style = Style::Ascii);
std::string to_string(const TermSet& ts, Style style = Style::Ascii);

struct ParseOptions {
  // When set, identifiers in this set are variables and everything else is a name.
  // When unset, identifiers starting with 'z' are variables.
  const std::set<std::string>* vars = nullptr;
  bool allow_reserved = false;
};

Term parse_term(std::string_view text, const ParseOptions& opts = {});
// Parses one term starting at pos and advances pos past it; errors report positions in text.
Term parse_term_at(std::string_view text, size_t& pos, const ParseOptions& opts = {});

// Extends sigma so that sigma(pattern) = t syntactically; every variable of pattern is a hole.
bool match(const Term& pattern, const Term& t, Substitution& sigma);

// Renumber all non-reserved variables left to right as z1, z2, ...
Term renumber_vars(const Term& t);

}  // namespace strongsec

template <>
struct std::hash<strongsec::Term> {
  std::size_t operator()(const strongsec::Term& t) const { return t.hash(); }
};
