#ifndef ASB_LEXICON_HPP_
#define ASB_LEXICON_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "asb/corpus.hpp"
#include "asb/error.hpp"
#include "asb/io.hpp"

namespace asb {

enum class LexiconSource { kHatebase, kRsdb, kWikiSlurs, kExpanded, kUser };
enum class LexiconKind { kBasic, kExtended, kMerged };

inline std::string_view to_string(LexiconSource s) {
  switch (s) {
    case LexiconSource::kHatebase: return "HATEBASE";
    case LexiconSource::kRsdb: return "RSDB";
    case LexiconSource::kWikiSlurs: return "WIKI_SLURS";
    case LexiconSource::kExpanded: return "EXPANDED";
    case LexiconSource::kUser: return "USER";
  }
  return "USER";
}

inline LexiconSource parse_source(std::string_view s) {
  if (s == "HATEBASE") return LexiconSource::kHatebase;
  if (s == "RSDB") return LexiconSource::kRsdb;
  if (s == "WIKI_SLURS") return LexiconSource::kWikiSlurs;
  if (s == "EXPANDED") return LexiconSource::kExpanded;
  if (s == "USER") return LexiconSource::kUser;
  throw ValidationError("unknown lexicon source '" + std::string(s) + "'");
}

inline std::string_view to_string(LexiconKind k) {
  switch (k) {
    case LexiconKind::kBasic: return "BASIC";
    case LexiconKind::kExtended: return "EXTENDED";
    case LexiconKind::kMerged: return "MERGED";
  }
  return "BASIC";
}

inline LexiconKind parse_kind(std::string_view s) {
  if (s == "BASIC") return LexiconKind::kBasic;
  if (s == "EXTENDED") return LexiconKind::kExtended;
  if (s == "MERGED") return LexiconKind::kMerged;
  throw ValidationError("unknown lexicon kind '" + std::string(s) + "'");
}

struct LexiconEntry {
  std::string term;  // normalized, space-joined tokens
  std::uint32_t arity = 1;
  LexiconSource source = LexiconSource::kUser;
  std::uint64_t ref_count = 0;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Named set of lexicon entries keyed by term. Entries iterate in term order.
class LexiconSet {
 public:
  LexiconSet() = default;
  LexiconSet(std::string name, LexiconKind kind) : name_(std::move(name)), kind_(kind) {}

  const std::string& name() const { return name_; }
  LexiconKind kind() const { return kind_; }
  void set_name(std::string name) { name_ = std::move(name); }
  void set_kind(LexiconKind kind) { kind_ = kind; }

  /// Inserts unless the term exists already; returns true when inserted.
  /// The term must already be normalized.
  bool insert(LexiconEntry entry) {
    if (entry.term.empty()) throw ValidationError("empty lexicon term");
    if (kind_ == LexiconKind::kExtended && entry.source != LexiconSource::kExpanded) {
      throw ValidationError("extended lexicon accepts only EXPANDED entries");
    }
    entry.arity = static_cast<std::uint32_t>(split_term(entry.term).size());
    return entries_.emplace(entry.term, std::move(entry)).second;
  }

  bool contains(const std::string& term) const { return entries_.count(term) != 0; }
  const LexiconEntry* find(const std::string& term) const {
    auto it = entries_.find(term);
    return it == entries_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::vector<std::string> terms() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [term, _] : entries_) out.push_back(term);
    return out;
  }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const LexiconSet&, const LexiconSet&) = default;

 private:
  std::string name_ = "lexicon";
  LexiconKind kind_ = LexiconKind::kBasic;
  std::map<std::string, LexiconEntry> entries_;
};

// ---------------------------------------------------------------------------
// Term-list files

struct TermListFile {
  std::filesystem::path path;
  LexiconSource source = LexiconSource::kUser;
};

/// Normalized terms of a term-list file: one per line, '#' comment lines and
/// blank lines skipped. A line is a comment only when '#' is followed by a
/// space or ends the line, so hashtag entries like "#kungflu" still load.
inline std::vector<std::string> read_term_list(const std::filesystem::path& path) {
  std::vector<std::string> terms;
  io::LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' &&
        (first + 1 == line.size() || line[first + 1] == ' ' || line[first + 1] == '#' ||
         line[first + 1] == '\t')) {
      continue;
    }
    std::string term = normalize_term(line);
    if (!term.empty()) terms.push_back(std::move(term));
  }
  return terms;
}

/// Union of normalized terms across files; the first file that lists a term
/// determines its provenance.
inline LexiconSet merge_sources(std::span<const TermListFile> files, std::string name = "basic") {
  LexiconSet lex(std::move(name), LexiconKind::kBasic);
  for (const auto& f : files) {
    for (auto& term : read_term_list(f.path)) {
      lex.insert(LexiconEntry{std::move(term), 1, f.source, 0});
    }
  }
  if (lex.empty()) throw ValidationError("empty lexicon");
  return lex;
}

/// Returns lex minus the stoplist terms (both normalized). Warns when nothing
/// survives.
inline LexiconSet apply_stoplist(const LexiconSet& lex, std::span<const std::string> stoplist) {
  std::unordered_set<std::string> stop;
  for (const auto& s : stoplist) stop.insert(normalize_term(s));
  LexiconSet out(lex.name(), lex.kind());
  for (const auto& [term, entry] : lex) {
    if (stop.count(term) == 0) out.insert(entry);
  }
  if (out.empty() && !lex.empty()) warn("stoplist removed every lexicon term");
  return out;
}

// ---------------------------------------------------------------------------
// Reference corpus and frequency filter

struct ReferenceRecord {
  TokenSequence tokens;
  bool antisocial = false;
};

/// Loads `{ "text": ..., "label": "antisocial"|"normal" }` lines.
inline std::vector<ReferenceRecord> read_reference_corpus(const std::filesystem::path& path) {
  std::vector<ReferenceRecord> out;
  io::LineReader reader(path);
  std::string line;
  std::size_t lineno = 0;
  while (reader.next(line)) {
    ++lineno;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string() ||
        !j.contains("label") || !j["label"].is_string()) {
      throw ValidationError("malformed reference record at " + path.string() + ":" +
                            std::to_string(lineno));
    }
    const auto label = j["label"].get<std::string>();
    if (label != "antisocial" && label != "normal") {
      throw ValidationError("unknown reference label '" + label + "' at " + path.string() + ":" +
                            std::to_string(lineno));
    }
    out.push_back({normalize(j["text"].get<std::string>(), std::to_string(lineno)),
                   label == "antisocial"});
  }
  return out;
}

/// Number of antisocial reference records containing each lexicon term
/// (once per record; multi-token terms as contiguous token runs).
inline std::unordered_map<std::string, std::uint64_t> reference_counts(
    const LexiconSet& lex, std::span<const ReferenceRecord> reference) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::size_t max_arity = 1;
  for (const auto& [term, entry] : lex) {
    counts.emplace(term, 0);
    max_arity = std::max<std::size_t>(max_arity, entry.arity);
  }
  std::unordered_set<std::string> seen;
  std::string gram;
  for (const auto& rec : reference) {
    if (!rec.antisocial) continue;
    seen.clear();
    const auto toks = bare_tokens(rec.tokens.tokens);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      gram.clear();
      for (std::size_t n = 0; n < max_arity && i + n < toks.size(); ++n) {
        if (n > 0) gram.push_back(' ');
        gram += toks[i + n];
        auto it = counts.find(gram);
        if (it != counts.end() && seen.insert(gram).second) ++it->second;
      }
    }
  }
  return counts;
}

/// Sets ref_count on every entry and drops entries seen in fewer than
/// `min_count` antisocial reference records.
inline LexiconSet frequency_filter(const LexiconSet& lex, std::span<const ReferenceRecord> reference,
                                   std::uint64_t min_count = 5) {
  if (reference.empty()) {
    throw ValidationError("reference corpus is empty; frequency filter would drop every term");
  }
  const auto counts = reference_counts(lex, reference);
  LexiconSet out(lex.name(), lex.kind());
  for (const auto& [term, entry] : lex) {
    LexiconEntry e = entry;
    e.ref_count = counts.at(term);
    if (e.ref_count >= min_count) out.insert(std::move(e));
  }
  return out;
}

/// Union of several sets (first occurrence wins), kind MERGED.
inline LexiconSet union_lexicons(std::span<const LexiconSet* const> sets, std::string name = "merged") {
  LexiconSet out(std::move(name), LexiconKind::kMerged);
  for (const auto* s : sets) {
    for (const auto& [_, entry] : *s) out.insert(entry);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: {name, kind, entries:[{term, arity, source, ref_count}]}

inline nlohmann::json to_json(const LexiconSet& lex) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [term, e] : lex) {
    entries.push_back({{"term", e.term},
                       {"arity", e.arity},
                       {"source", std::string(to_string(e.source))},
                       {"ref_count", e.ref_count}});
  }
  return {{"name", lex.name()}, {"kind", std::string(to_string(lex.kind()))}, {"entries", entries}};
}

inline LexiconSet lexicon_from_json(const nlohmann::json& j) {
  try {
    LexiconSet lex(j.at("name").get<std::string>(), parse_kind(j.at("kind").get<std::string>()));
    for (const auto& e : j.at("entries")) {
      LexiconEntry entry;
      entry.term = e.at("term").get<std::string>();
      entry.source = parse_source(e.at("source").get<std::string>());
      entry.ref_count = e.at("ref_count").get<std::uint64_t>();
      lex.insert(std::move(entry));
    }
    return lex;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed lexicon JSON: ") + ex.what());
  }
}

inline void save_lexicon(const std::filesystem::path& path, const LexiconSet& lex) {
  io::write_atomic(path, to_json(lex).dump(2) + "\n");
}

inline LexiconSet load_lexicon(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw ValidationError("lexicon file is not JSON: " + path.string());
  return lexicon_from_json(j);
}

}  // namespace asb

#endif  // ASB_LEXICON_HPP_
