#ifndef ASB_LABELS_HPP_
#define ASB_LABELS_HPP_

#include <string>
#include <string_view>

#include "asb/error.hpp"

namespace asb {

// kUnscored only ever appears as a toxicity outcome.
enum class Label { kNormal, kAntisocial, kUnscored };

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::kNormal: return "normal";
    case Label::kAntisocial: return "antisocial";
    case Label::kUnscored: return "unscored";
  }
  return "normal";
}

inline Label parse_label(std::string_view s) {
  if (s == "normal") return Label::kNormal;
  if (s == "antisocial") return Label::kAntisocial;
  if (s == "unscored") return Label::kUnscored;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

}  // namespace asb

#endif  // ASB_LABELS_HPP_
