#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stance {

// The three responsibility-framing classes. The numeric values index every
// per-class array in the library (probabilities, confusion rows, stats).
enum class Stance : int { kProRussian = 0, kProUkrainian = 1, kNeutral = 2 };

inline constexpr int kNumClasses = 3;
inline constexpr std::array<Stance, kNumClasses> kAllStances = {
    Stance::kProRussian, Stance::kProUkrainian, Stance::kNeutral};

enum class Provenance { kManual, kPredicted, kTriageConfirmed, kPropagated };

struct StanceLabel {
  Stance stance = Stance::kNeutral;
  Provenance provenance = Provenance::kManual;

  friend bool operator==(const StanceLabel&, const StanceLabel&) = default;
};

constexpr int index_of(Stance s) { return static_cast<int>(s); }
constexpr Stance stance_at(int i) { return static_cast<Stance>(i); }

// Wire names: pro_russian / pro_ukrainian / neutral.
std::string_view to_string(Stance s);
std::optional<Stance> parse_stance(std::string_view name);
// Same as parse_stance but throws ParseError on unknown names.
Stance stance_from_string(std::string_view name);

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or values.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Violated preconditions on otherwise well-formed inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace stance
