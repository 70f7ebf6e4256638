#ifndef ASB_CORPUS_HPP_
#define ASB_CORPUS_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/parallel.hpp"
#include "asb/timeutil.hpp"
#include "asb/wordlists.hpp"

namespace asb {

/// One archived post.
struct TweetRecord {
  std::string id;
  std::int64_t created_at = 0;  // UTC epoch seconds
  std::string text;
  std::optional<std::string> lang;
  bool is_retweet = false;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_id;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

inline constexpr std::string_view kUserToken = "@user";
inline constexpr std::string_view kUrlToken = "http_url";

/// Collection keywords used to select on-topic posts (case-sensitive).
inline std::vector<std::string> default_topic_keywords() {
  return {"covid-19", "COVID-19", "COVID", "Coronavirus", "coronavirus", "CoronaVirus", "corona"};
}

struct FilterConfig {
  std::vector<std::string> keywords = default_topic_keywords();
  bool english_only = true;
  // Minimum fraction of word tokens found in the bundled frequency list for
  // an untagged record to count as English.
  double english_fallback_min_fraction = 0.3;
};

struct IngestReport {
  std::uint64_t lines_read = 0;
  std::uint64_t records_kept = 0;
  std::uint64_t records_dropped_topic = 0;
  std::uint64_t records_dropped_lang = 0;
  std::uint64_t malformed_lines = 0;

  IngestReport& operator+=(const IngestReport& o) {
    lines_read += o.lines_read;
    records_kept += o.records_kept;
    records_dropped_topic += o.records_dropped_topic;
    records_dropped_lang += o.records_dropped_lang;
    malformed_lines += o.malformed_lines;
    return *this;
  }

  bool balanced() const {
    return lines_read ==
           records_kept + records_dropped_topic + records_dropped_lang + malformed_lines;
  }

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

// ---------------------------------------------------------------------------
// Tokenization

namespace detail {

enum class CharClass { kWord, kSpace, kPunct };

struct Decoded {
  char32_t cp;
  std::size_t len;
};

// Invalid sequences decode as one opaque byte, classified as a word char.
inline Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + len > s.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

inline CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    const auto c = static_cast<char>(cp);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      return CharClass::kSpace;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_') {
      return CharClass::kWord;
    }
    return CharClass::kPunct;
  }
  if (cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200D) ||
      cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000 ||
      cp == 0xFEFF) {
    return CharClass::kSpace;
  }
  if ((cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
      (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
      (cp >= 0x20A0 && cp <= 0x20CF) || (cp >= 0x2190 && cp <= 0x2BFF) ||
      (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
      (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0x1F000 && cp <= 0x1FAFF)) {
    return CharClass::kPunct;
  }
  return CharClass::kWord;
}

inline bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[pos + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

inline void append_lower(std::string& out, std::string_view s) {
  for (char c : s) out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
}

// End of the maximal run of word characters starting at `pos`.
inline std::size_t word_run_end(std::string_view s, std::size_t pos) {
  while (pos < s.size()) {
    const Decoded d = decode_utf8(s, pos);
    if (classify(d.cp) != CharClass::kWord) break;
    pos += d.len;
  }
  return pos;
}

}  // namespace detail

/// Splits text into lowercase tokens.
///
/// Separators are Unicode whitespace and punctuation. At a token boundary:
/// `http://`, `https://` and `www.` start a URL that runs to the next
/// whitespace and becomes `http_url`; `@name` becomes `@user`; `#tag` emits
/// both `#tag` and `tag`. Only ASCII letters are case-folded.
inline std::vector<std::string> tokenize(std::string_view text) {
  using detail::CharClass;
  std::vector<std::string> tokens;
  std::size_t i = 0;
  bool prev_word = false;
  while (i < text.size()) {
    const detail::Decoded d = detail::decode_utf8(text, i);
    const CharClass cls = detail::classify(d.cp);
    if (!prev_word && (detail::starts_with_icase(text, i, "http://") ||
                       detail::starts_with_icase(text, i, "https://") ||
                       detail::starts_with_icase(text, i, "www."))) {
      while (i < text.size()) {
        const detail::Decoded u = detail::decode_utf8(text, i);
        if (detail::classify(u.cp) == CharClass::kSpace) break;
        i += u.len;
      }
      tokens.emplace_back(kUrlToken);
      prev_word = false;
      continue;
    }
    if (!prev_word && (d.cp == '@' || d.cp == '#')) {
      const std::size_t end = detail::word_run_end(text, i + 1);
      if (end > i + 1) {
        if (d.cp == '@') {
          tokens.emplace_back(kUserToken);
        } else {
          std::string bare;
          detail::append_lower(bare, text.substr(i + 1, end - i - 1));
          tokens.push_back("#" + bare);
          tokens.push_back(std::move(bare));
        }
        i = end;
        prev_word = true;
        continue;
      }
    }
    if (cls == CharClass::kWord) {
      const std::size_t end = detail::word_run_end(text, i);
      std::string tok;
      detail::append_lower(tok, text.substr(i, end - i));
      tokens.push_back(std::move(tok));
      i = end;
      prev_word = true;
      continue;
    }
    prev_word = false;
    i += d.len;
  }
  return tokens;
}

inline TokenSequence normalize(std::string_view text, std::string source_id = {}) {
  return TokenSequence{tokenize(text), std::move(source_id)};
}

namespace detail {

// True when tokens[i] is the bare twin emitted right after hashtag tokens[i-1].
inline bool is_hashtag_twin(std::span<const std::string> tokens, std::size_t i) {
  return i > 0 && i < tokens.size() && tokens[i - 1].size() > 1 && tokens[i - 1][0] == '#' &&
         std::string_view(tokens[i - 1]).substr(1) == tokens[i];
}

}  // namespace detail

/// The stream lexicon terms are matched against: each hashtag that is
/// followed by its bare twin is dropped, so "#virus" reads as "virus".
inline std::vector<std::string> bare_tokens(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!detail::is_hashtag_twin(tokens, i + 1)) out.push_back(tokens[i]);
  }
  return out;
}

/// Renders tokens back to text such that tokenize(render_tokens(t)) == t for
/// any tokenizer output: hashtag twins are folded back into the hashtag.
inline std::string render_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (detail::is_hashtag_twin(tokens, i)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

/// Canonical form of a lexicon term or query word: tokenized, hashtags reduced
/// to their bare word, space-joined. Since tokenization emits the bare twin of
/// every hashtag, a term stored this way matches both "#tag" and "tag".
inline std::string normalize_term(std::string_view term) {
  const auto tokens = tokenize(term);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (detail::is_hashtag_twin(tokens, i + 1)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

inline std::vector<std::string> split_term(std::string_view term) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= term.size()) {
    const std::size_t sp = term.find(' ', start);
    const std::size_t end = sp == std::string_view::npos ? term.size() : sp;
    if (end > start) parts.emplace_back(term.substr(start, end - start));
    if (sp == std::string_view::npos) break;
    start = sp + 1;
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Filters

inline bool filter_topic(const TweetRecord& record, std::span<const std::string> keywords) {
  return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
    return !k.empty() && record.text.find(k) != std::string::npos;
  });
}

/// Fraction of plain word tokens (no sentinels, hashtags or numbers) found in
/// the bundled English frequency list. Returns 0 when there are none.
inline double english_word_fraction(std::string_view text) {
  static const std::unordered_set<std::string_view> kWords(
      wordlists::kEnglishFrequent.begin(), wordlists::kEnglishFrequent.end());
  std::size_t eligible = 0;
  std::size_t hits = 0;
  const auto tokens = tokenize(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok == kUserToken || tok == kUrlToken || tok == "rt" || tok.front() == '#') continue;
    if (detail::is_hashtag_twin(tokens, i)) continue;
    if (std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    ++eligible;
    if (kWords.count(tok) != 0) ++hits;
  }
  return eligible == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(eligible);
}

inline bool filter_language(const TweetRecord& record, double fallback_min_fraction = 0.3) {
  if (record.lang && !record.lang->empty() && *record.lang != "und") {
    std::string lang;
    detail::append_lower(lang, *record.lang);
    return lang == "en" || lang.rfind("en-", 0) == 0;
  }
  return english_word_fraction(record.text) >= fallback_min_fraction;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const TweetRecord& r) {
  nlohmann::json j;
  j["id"] = r.id;
  j["created_at"] = timeutil::format_timestamp(r.created_at);
  j["text"] = r.text;
  j["lang"] = r.lang ? nlohmann::json(*r.lang) : nlohmann::json(nullptr);
  j["is_retweet"] = r.is_retweet;
  return j;
}

namespace detail {

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

}  // namespace detail

/// Builds a record from one parsed input object. Returns nullopt when a
/// required field is missing, mistyped or invalid.
inline std::optional<TweetRecord> record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) return std::nullopt;
  TweetRecord r;
  const auto id = j.find("id");
  if (id == j.end()) return std::nullopt;
  if (id->is_string()) {
    r.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    r.id = id->dump();
  } else {
    return std::nullopt;
  }
  if (r.id.empty()) return std::nullopt;
  const auto created = j.find("created_at");
  if (created == j.end() || !created->is_string()) return std::nullopt;
  const auto ts = timeutil::parse_timestamp(created->get<std::string>());
  if (!ts) return std::nullopt;
  r.created_at = *ts;
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) return std::nullopt;
  r.text = text->get<std::string>();
  if (detail::is_blank(r.text)) return std::nullopt;
  const auto lang = j.find("lang");
  if (lang != j.end() && lang->is_string()) r.lang = lang->get<std::string>();
  if (const auto rt = j.find("is_retweet"); rt != j.end() && rt->is_boolean()) {
    r.is_retweet = rt->get<bool>();
  }
  if (const auto rs = j.find("retweeted_status"); rs != j.end() && !rs->is_null()) {
    r.is_retweet = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Ingestion

struct IngestResult {
  std::vector<TweetRecord> records;  // input order
  IngestReport report;
};

namespace detail {

enum class LineOutcome { kKept, kDroppedTopic, kDroppedLang, kMalformed };

inline LineOutcome classify_line(std::string_view line, const FilterConfig& filters,
                                 std::optional<TweetRecord>& out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return LineOutcome::kMalformed;
  out = record_from_json(j);
  if (!out) return LineOutcome::kMalformed;
  if (!filter_topic(*out, filters.keywords)) return LineOutcome::kDroppedTopic;
  if (filters.english_only && !filter_language(*out, filters.english_fallback_min_fraction)) {
    return LineOutcome::kDroppedLang;
  }
  return LineOutcome::kKept;
}

}  // namespace detail

/// Stateful ingester: feed it batches of lines from any number of sources.
/// Lines are classified in parallel; the merge (duplicate-id detection and
/// counting) is sequential, so results do not depend on the worker count.
/// A repeated id is counted as malformed; the first occurrence wins.
class Ingester {
 public:
  explicit Ingester(FilterConfig filters, unsigned workers = 1)
      : filters_(std::move(filters)), workers_(workers) {
    if (filters_.keywords.empty()) throw ValidationError("topic keyword list is empty");
  }

  void feed(std::span<const std::string> lines) {
    std::vector<detail::LineOutcome> outcomes(lines.size());
    std::vector<std::optional<TweetRecord>> parsed(lines.size());
    parallel_shards(lines.size(), workers_, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        outcomes[i] = detail::classify_line(lines[i], filters_, parsed[i]);
      }
    });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ++result_.report.lines_read;
      switch (outcomes[i]) {
        case detail::LineOutcome::kMalformed:
          ++result_.report.malformed_lines;
          break;
        case detail::LineOutcome::kDroppedTopic:
          ++result_.report.records_dropped_topic;
          break;
        case detail::LineOutcome::kDroppedLang:
          ++result_.report.records_dropped_lang;
          break;
        case detail::LineOutcome::kKept:
          if (!seen_.insert(parsed[i]->id).second) {
            ++result_.report.malformed_lines;
          } else {
            ++result_.report.records_kept;
            result_.records.push_back(std::move(*parsed[i]));
          }
          break;
      }
    }
  }

  void feed_file(const std::filesystem::path& path, std::size_t batch = 65536) {
    io::LineReader reader(path);
    std::vector<std::string> lines;
    std::string line;
    while (reader.next(line)) {
      lines.push_back(line);
      if (lines.size() >= batch) {
        feed(lines);
        lines.clear();
      }
    }
    feed(lines);
  }

  const IngestResult& result() const { return result_; }
  IngestResult take() { return std::move(result_); }

 private:
  FilterConfig filters_;
  unsigned workers_;
  IngestResult result_;
  std::unordered_set<std::string> seen_;
};

inline IngestResult ingest_jsonl(std::istream& source, const FilterConfig& filters,
                                 unsigned workers = 1) {
  if (!source) throw IoError("input stream is not readable");
  Ingester ingester(filters, workers);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(source, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (source.bad()) throw IoError("read error on input stream");
  ingester.feed(lines);
  return ingester.take();
}

inline IngestResult ingest_files(std::span<const std::filesystem::path> paths,
                                 const FilterConfig& filters, unsigned workers = 1) {
  Ingester ingester(filters, workers);
  for (const auto& p : paths) ingester.feed_file(p);
  return ingester.take();
}

// ---------------------------------------------------------------------------
// Record store: line-delimited JSON sorted by created_at then id.

inline void sort_records(std::vector<TweetRecord>& records) {
  std::sort(records.begin(), records.end(), [](const TweetRecord& a, const TweetRecord& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
  });
}

inline std::string serialize_record_store(std::vector<TweetRecord> records) {
  sort_records(records);
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

inline void write_record_store(const std::filesystem::path& path,
                               std::vector<TweetRecord> records) {
  io::write_atomic(path, serialize_record_store(std::move(records)));
}

inline std::vector<TweetRecord> read_record_store(const std::filesystem::path& path) {
  std::vector<TweetRecord> records;
  io::LineReader reader(path);
  std::string line;
  std::size_t lineno = 0;
  while (reader.next(line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    auto r = record_from_json(j);
    if (!r) {
      throw IoError("corrupt record store '" + path.string() + "' at line " +
                    std::to_string(lineno));
    }
    records.push_back(std::move(*r));
  }
  return records;
}

}  // namespace asb

#endif  // ASB_CORPUS_HPP_
