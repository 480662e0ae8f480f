#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "strongsec/frame.hpp"
#include "strongsec/verdict.hpp"

namespace strongsec::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a(std::string_view data);

json to_json(const Violation& v);
json to_json(const FrameReport& r);
json to_json(const ConditionReport& r);
json to_json(const ESetReport& r);
json to_json(const EquivalenceVerdict& v);
json to_json(const PassiveReport& r);
json to_json(const StandardFrame& f);
json to_json(const SecrecyEvidence& e);
json to_json(const ProcessReport& r);

std::string render(const FrameReport& r);
std::string render(const ConditionReport& r);
std::string render(const ESetReport& r, Style style);
std::string render(const EquivalenceVerdict& v, Style style);
std::string render(const PassiveReport& r, Style style);
std::string render(const SecrecyEvidence& e, Style style);
std::string render(const ProcessReport& r, Style style);

}  // namespace strongsec::cli
