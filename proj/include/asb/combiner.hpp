#ifndef ASB_COMBINER_HPP_
#define ASB_COMBINER_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/labels.hpp"

namespace asb {

/// Union rule: antisocial if either method says so. An unscored toxicity
/// outcome counts as normal.
inline Label combine(Label lexicon_label, Label toxicity_label) {
  if (lexicon_label == Label::kUnscored) throw ValidationError("lexicon label cannot be unscored");
  return (lexicon_label == Label::kAntisocial || toxicity_label == Label::kAntisocial)
             ? Label::kAntisocial
             : Label::kNormal;
}

struct AnnotationRecord {
  std::string source_id;
  Label lexicon_label = Label::kNormal;
  std::vector<std::string> matched_terms;
  std::optional<double> toxicity_score;
  Label toxicity_label = Label::kUnscored;
  Label combined_label = Label::kNormal;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

inline AnnotationRecord make_annotation(std::string source_id, std::vector<std::string> matched_terms,
                                        std::optional<double> toxicity_score, double threshold) {
  AnnotationRecord r;
  r.source_id = std::move(source_id);
  r.lexicon_label = matched_terms.empty() ? Label::kNormal : Label::kAntisocial;
  r.matched_terms = std::move(matched_terms);
  r.toxicity_score = toxicity_score;
  r.toxicity_label = !toxicity_score                ? Label::kUnscored
                     : (*toxicity_score > threshold) ? Label::kAntisocial
                                                     : Label::kNormal;
  r.combined_label = combine(r.lexicon_label, r.toxicity_label);
  return r;
}

inline nlohmann::json to_json(const AnnotationRecord& r) {
  return {{"id", r.source_id},
          {"lexicon_label", std::string(to_string(r.lexicon_label))},
          {"matched_terms", r.matched_terms},
          {"toxicity_score", r.toxicity_score ? nlohmann::json(*r.toxicity_score) : nlohmann::json(nullptr)},
          {"toxicity_label", std::string(to_string(r.toxicity_label))},
          {"combined_label", std::string(to_string(r.combined_label))}};
}

inline AnnotationRecord annotation_from_json(const nlohmann::json& j) {
  try {
    AnnotationRecord r;
    r.source_id = j.at("id").get<std::string>();
    r.lexicon_label = parse_label(j.at("lexicon_label").get<std::string>());
    r.matched_terms = j.at("matched_terms").get<std::vector<std::string>>();
    if (!j.at("toxicity_score").is_null()) r.toxicity_score = j.at("toxicity_score").get<double>();
    r.toxicity_label = parse_label(j.at("toxicity_label").get<std::string>());
    r.combined_label = parse_label(j.at("combined_label").get<std::string>());
    if (r.combined_label != combine(r.lexicon_label, r.toxicity_label)) {
      throw ValidationError("annotation '" + r.source_id + "' violates the union rule");
    }
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed annotation record: ") + ex.what());
  }
}

inline std::string serialize_annotations(std::span<const AnnotationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

inline std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  std::vector<AnnotationRecord> out;
  io::LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError("annotation store '" + path.string() + "' has a non-JSON line");
    out.push_back(annotation_from_json(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary table

struct MethodCounts {
  std::uint64_t antisocial = 0;
  std::uint64_t normal = 0;

  friend bool operator==(const MethodCounts&, const MethodCounts&) = default;
};

struct SummaryTable {
  MethodCounts lexicon;
  MethodCounts toxicity;  // unscored records count as normal here
  MethodCounts combined;
  std::uint64_t total = 0;
  std::uint64_t unscored = 0;

  SummaryTable& operator+=(const SummaryTable& o) {
    for (auto [a, b] : {std::pair{&lexicon, &o.lexicon}, {&toxicity, &o.toxicity}, {&combined, &o.combined}}) {
      a->antisocial += b->antisocial;
      a->normal += b->normal;
    }
    total += o.total;
    unscored += o.unscored;
    return *this;
  }

  /// Inclusion-exclusion consistency of the three rows.
  bool consistent() const {
    auto sums = [&](const MethodCounts& m) { return m.antisocial + m.normal == total; };
    const auto lo = std::max(lexicon.antisocial, toxicity.antisocial);
    const auto hi = lexicon.antisocial + toxicity.antisocial;
    return sums(lexicon) && sums(toxicity) && sums(combined) && lo <= combined.antisocial &&
           combined.antisocial <= hi;
  }

  /// Records flagged by both methods, derived by inclusion-exclusion.
  std::uint64_t overlap() const { return lexicon.antisocial + toxicity.antisocial - combined.antisocial; }

  friend bool operator==(const SummaryTable&, const SummaryTable&) = default;
};

/// Counts per method from per-record labels. Throws on a repeated source_id.
inline SummaryTable summarize(std::span<const AnnotationRecord> annotations) {
  SummaryTable t;
  std::unordered_set<std::string> seen;
  seen.reserve(annotations.size());
  for (const auto& r : annotations) {
    if (!seen.insert(r.source_id).second) {
      throw ValidationError("duplicate source_id '" + r.source_id + "' in annotation stream");
    }
    ++t.total;
    (r.lexicon_label == Label::kAntisocial ? t.lexicon.antisocial : t.lexicon.normal)++;
    (r.toxicity_label == Label::kAntisocial ? t.toxicity.antisocial : t.toxicity.normal)++;
    (r.combined_label == Label::kAntisocial ? t.combined.antisocial : t.combined.normal)++;
    if (r.toxicity_label == Label::kUnscored) ++t.unscored;
  }
  return t;
}

/// Table layout: method,antisocial,normal with rows lexicon, toxicity, combined.
inline std::string summary_csv(const SummaryTable& t) {
  std::string out = "method,antisocial,normal\n";
  auto row = [&](const char* name, const MethodCounts& m) {
    out += std::string(name) + "," + std::to_string(m.antisocial) + "," + std::to_string(m.normal) + "\n";
  };
  row("lexicon", t.lexicon);
  row("toxicity", t.toxicity);
  row("combined", t.combined);
  return out;
}

inline nlohmann::json to_json(const SummaryTable& t) {
  auto m = [](const MethodCounts& c) { return nlohmann::json{{"antisocial", c.antisocial}, {"normal", c.normal}}; };
  return {{"lexicon", m(t.lexicon)},
          {"toxicity", m(t.toxicity)},
          {"combined", m(t.combined)},
          {"total", t.total},
          {"unscored", t.unscored}};
}

}  // namespace asb

#endif  // ASB_COMBINER_HPP_
