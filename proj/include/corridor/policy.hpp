#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>

#include "corridor/error.hpp"

namespace corridor {

/// Lane policies. Declaration order is the deterministic tie-break order.
enum class Policy { mtp, eblp, hovlp };

inline constexpr std::array<Policy, 3> kAllPolicies{Policy::mtp, Policy::eblp, Policy::hovlp};

/// Traveller classes with their own unit-time profile.
enum class TravelClass { automobile, bus, low_occ_auto, high_occ_auto };

inline std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::mtp: return "MTP";
    case Policy::eblp: return "EBLP";
    case Policy::hovlp: return "HOVLP";
  }
  return "?";
}

inline std::string_view to_string(TravelClass c) {
  switch (c) {
    case TravelClass::automobile: return "auto";
    case TravelClass::bus: return "bus";
    case TravelClass::low_occ_auto: return "low_occ_auto";
    case TravelClass::high_occ_auto: return "high_occ_auto";
  }
  return "?";
}

inline std::size_t index_of(Policy p) { return static_cast<std::size_t>(p); }

/// Accepts "mtp", "MTP", "eblp", ... case-insensitively.
inline Policy parse_policy(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "mtp") return Policy::mtp;
  if (lower == "eblp") return Policy::eblp;
  if (lower == "hovlp") return Policy::hovlp;
  throw ValidationError("policy", "unknown policy '" + std::string(text) +
                                      "' (expected mtp, eblp or hovlp)");
}

/// MTP and EBLP carry one auto class; HOVLP splits autos by occupancy.
inline bool class_valid(Policy p, TravelClass c) {
  if (c == TravelClass::bus) return true;
  if (p == Policy::hovlp) return c == TravelClass::low_occ_auto || c == TravelClass::high_occ_auto;
  return c == TravelClass::automobile;
}

inline void require_class(Policy p, TravelClass c) {
  if (!class_valid(p, c)) {
    throw ValidationError("class", std::string("class ") + std::string(to_string(c)) +
                                       " is not defined under " + std::string(to_string(p)));
  }
}

}  // namespace corridor
