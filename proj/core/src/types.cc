#include "stance/types.h"

#include <string>

namespace stance {

std::string_view to_string(Stance s) {
  switch (s) {
    case Stance::kProRussian:
      return "pro_russian";
    case Stance::kProUkrainian:
      return "pro_ukrainian";
    case Stance::kNeutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<Stance> parse_stance(std::string_view name) {
  for (Stance s : kAllStances) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Stance stance_from_string(std::string_view name) {
  if (auto s = parse_stance(name)) return *s;
  throw ParseError("unknown stance label '" + std::string(name) + "'");
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kManual:
      return "manual";
    case Provenance::kPredicted:
      return "predicted";
    case Provenance::kTriageConfirmed:
      return "triage_confirmed";
    case Provenance::kPropagated:
      return "propagated";
  }
  return "manual";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  for (Provenance p : {Provenance::kManual, Provenance::kPredicted, Provenance::kTriageConfirmed,
                       Provenance::kPropagated}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

}  // namespace stance
