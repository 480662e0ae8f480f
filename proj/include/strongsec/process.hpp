#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "strongsec/term.hpp"

namespace strongsec {

enum class PKind { Nil, Par, Repl, New, In, Out, If };

struct Proc;
using ProcPtr = std::shared_ptr<const Proc>;

struct Proc {
  PKind kind = PKind::Nil;
  // Par: operands; Repl/New/In/Out: body; If: then, else
  std::vector<ProcPtr> children;
  std::string name;  // New: bound name; In/Out: channel
  std::string var;   // In: bound variable
  Term t1;           // Out: message; If: left operand
  Term t2;           // If: right operand
  int line = 0;
  int col = 0;
  int id = 0;  // preorder index, stable for a parsed process
};

struct Process {
  ProcPtr root;
  std::set<std::string> bound_names;
  std::set<std::string> free_names;
  std::set<std::string> channels;
  // restricted names renamed apart by the parser -> the name written in the source
  std::map<std::string, std::string> origin;
  int node_count = 0;
};

Process parse_process(std::string_view text);
std::string to_string(const Proc& p, Style style = Style::Ascii);

enum class TestKind { Plain, CheckForm };

struct Test {
  Term left;
  Term right;
  TestKind kind = TestKind::Plain;
  // check-form: the message and signature operands and the key
  Term m;
  Term n;
  Term key;
};

struct MessageSets {
  std::vector<Term> outputs;
  std::vector<Term> test_operands;
  std::vector<Test> tests;
  std::map<std::string, std::string> origin;
  std::vector<Term> all() const;
};

MessageSets extract_messages(const Process& p);
MessageSets extract_messages(const ProcPtr& p);

}  // namespace strongsec
