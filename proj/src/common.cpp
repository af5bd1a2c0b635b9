#include "mcfod/common.hpp"

#include <cctype>

namespace mcfod {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Free: return "FREE";
    case Variant::FixedOptimistic: return "FIXED_OPTIMISTIC";
    case Variant::FixedRelaxed: return "FIXED_RELAXED";
  }
  return "?";
}

std::string to_string(ResponseMode m) {
  return m == ResponseMode::Optimistic ? "OPTIMISTIC" : "RELAXED";
}

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::EP: return "EP";
    case Formulation::EF: return "EF";
    case Formulation::IF: return "IF";
    case Formulation::IP: return "IP";
  }
  return "?";
}

static std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

Variant parse_variant(std::string_view s) {
  auto u = upper(s);
  if (u == "FREE" || u == "MCFOD") return Variant::Free;
  if (u == "FIXED_OPTIMISTIC" || u == "MCFOD_F" || u == "FIXED") return Variant::FixedOptimistic;
  if (u == "FIXED_RELAXED" || u == "RMCFOD_F" || u == "RELAXED") return Variant::FixedRelaxed;
  throw ParseError("unknown variant '" + std::string(s) + "'");
}

Formulation parse_formulation(std::string_view s) {
  auto u = upper(s);
  if (u == "EP") return Formulation::EP;
  if (u == "EF") return Formulation::EF;
  if (u == "IF") return Formulation::IF;
  if (u == "IP") return Formulation::IP;
  throw ParseError("unknown formulation '" + std::string(s) + "'");
}

}  // namespace mcfod
