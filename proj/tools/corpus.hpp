#pragma once

#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace strongsec::cli {

struct CorpusOptions {
  std::string dir = "corpus";
  std::optional<std::string> only;
  bool update_goldens = false;
  Style style = Style::Ascii;
};

struct EntryResult {
  std::string name;
  std::string kind;
  std::vector<std::string> problems;  // expectation and golden mismatches
  std::string report;                 // human-readable, compared against the golden
  json data;
  bool golden_written = false;
  bool pass() const { return problems.empty(); }
};

// Entries run concurrently; results come back in manifest order.
std::vector<EntryResult> run_corpus(const CorpusOptions& opts);

std::string read_file(const std::string& path);

}  // namespace strongsec::cli
