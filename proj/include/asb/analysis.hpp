#ifndef ASB_ANALYSIS_HPP_
#define ASB_ANALYSIS_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "asb/corpus.hpp"
#include "asb/embedding.hpp"
#include "asb/error.hpp"
#include "asb/labels.hpp"
#include "asb/timeutil.hpp"
#include "asb/wordlists.hpp"

namespace asb {

/// A tweet's tokens joined with its final label and timestamp.
struct LabeledTokens {
  std::string id;
  std::int64_t created_at = 0;
  std::vector<std::string> tokens;
  Label label = Label::kNormal;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Token stream with hashtag twins folded away; used for multi-token runs so
// "#x x" pairs produced by the tokenizer do not show up as bigrams.
inline std::vector<std::string> fold_twins(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_hashtag_twin(tokens, i)) out.push_back(tokens[i]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// N-gram frequency

struct NgramRow {
  std::string ngram;
  std::uint64_t count = 0;

  friend bool operator==(const NgramRow&, const NgramRow&) = default;
};

struct NgramTable {
  std::uint32_t n = 1;
  std::vector<NgramRow> rows;  // descending count, then lexicographic

  friend bool operator==(const NgramTable&, const NgramTable&) = default;
};

/// Stopwords, the normalized collection keywords (bare and as hashtags) and
/// the tokenizer's sentinel tokens.
inline std::unordered_set<std::string> default_exclusions(std::span<const std::string> topic_keywords) {
  std::unordered_set<std::string> out;
  for (auto w : wordlists::kStopwords) out.emplace(w);
  for (const auto& k : topic_keywords) {
    for (const auto& tok : tokenize(k)) {
      out.insert(tok);
      if (tok.front() != '#') out.insert("#" + tok);
    }
  }
  out.insert(std::string(kUserToken));
  out.insert(std::string(kUrlToken));
  out.insert("rt");
  return out;
}

/// Occurrence counts of contiguous token n-grams over antisocial records.
/// Unigrams use the raw token stream (a hashtag counts as "#x" and "x") and
/// drop excluded terms; longer n-grams use the twin-folded stream. top_k = 0
/// keeps every row.
inline NgramTable ngram_counts(std::span<const LabeledTokens> records, std::uint32_t n, std::size_t top_k,
                               const std::unordered_set<std::string>& exclusions) {
  if (n < 1 || n > 4) throw ValidationError("ngram_counts: n must be in 1..4");
  std::unordered_map<std::string, std::uint64_t> counts;
  bool any = false;
  for (const auto& r : records) {
    if (r.label != Label::kAntisocial) continue;
    any = true;
    if (n == 1) {
      for (const auto& t : r.tokens) {
        if (exclusions.count(t) == 0) ++counts[t];
      }
      continue;
    }
    const auto toks = detail::fold_twins(r.tokens);
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string gram = toks[i];
      for (std::size_t k = 1; k < n; ++k) gram += " " + toks[i + k];
      ++counts[gram];
    }
  }
  if (!any) warn("ngram_counts: no antisocial records; table is empty");
  NgramTable table;
  table.n = n;
  table.rows.reserve(counts.size());
  for (auto& [g, c] : counts) table.rows.push_back({g, c});
  std::sort(table.rows.begin(), table.rows.end(), [](const NgramRow& a, const NgramRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.ngram < b.ngram;
  });
  if (top_k > 0 && table.rows.size() > top_k) table.rows.resize(top_k);
  return table;
}

// ---------------------------------------------------------------------------
// Antisocial affinity

struct AffinityStats {
  std::uint64_t antisocial = 0;
  std::uint64_t total = 0;
  double affinity() const { return total == 0 ? 0.0 : static_cast<double>(antisocial) / static_cast<double>(total); }
};

/// Per-token counts of containing tweets, built once and queried many times.
class AffinityIndex {
 public:
  explicit AffinityIndex(std::span<const LabeledTokens> records) {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : records) {
      seen.clear();
      for (const auto& t : r.tokens) {
        if (!seen.insert(t).second) continue;
        auto& s = stats_[t];
        ++s.total;
        if (r.label == Label::kAntisocial) ++s.antisocial;
      }
    }
  }

  AffinityStats stats(const std::string& term) const {
    auto it = stats_.find(term);
    return it == stats_.end() ? AffinityStats{} : it->second;
  }

 private:
  std::unordered_map<std::string, AffinityStats> stats_;
};

/// Antisocial tweets containing the term divided by all tweets containing it.
/// Multi-token terms match contiguous runs.
inline double antisocial_affinity(std::string_view term, std::span<const LabeledTokens> records) {
  const auto parts = split_term(term);
  if (parts.empty()) throw TermNotFound(std::string(term));
  AffinityStats s;
  for (const auto& r : records) {
    const auto& toks = r.tokens;
    bool found = false;
    for (std::size_t i = 0; !found && i + parts.size() <= toks.size(); ++i) {
      found = std::equal(parts.begin(), parts.end(), toks.begin() + static_cast<std::ptrdiff_t>(i));
    }
    if (!found) continue;
    ++s.total;
    if (r.label == Label::kAntisocial) ++s.antisocial;
  }
  if (s.total == 0) throw TermNotFound(std::string(term));
  return s.affinity();
}

// ---------------------------------------------------------------------------
// Neighbor graph

struct GraphNode {
  std::string term;
  std::uint32_t order = 0;  // 0 target, 1 first-order, 2 second-order
  double affinity = 0.0;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string a;
  std::string b;
  double similarity = 0.0;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct NeighborGraph {
  std::string target;
  std::vector<GraphNode> nodes;  // target first, then order 1 by rank, then order 2
  std::vector<GraphEdge> edges;

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;
};

struct GraphConfig {
  std::size_t k1 = 15;
  std::size_t k2 = 5;
  double affinity_min = 0.5;
  std::uint64_t min_support = 3;  // tweets containing the term
};

/// Target plus its first- and second-order embedding neighbors that pass the
/// affinity filter (affinity >= affinity_min and support >= min_support).
/// Each order-1 node is among the k1 best-ranked qualifying neighbors of the
/// target; each order-1 node links to its k2 best-ranked qualifying neighbors
/// other than the target, and those not already in the graph become order-2.
inline NeighborGraph neighbor_graph(const EmbeddingModel& model, std::string_view target, const GraphConfig& cfg,
                                    const AffinityIndex& index) {
  if (cfg.k1 < 1 || cfg.k2 < 1) throw ValidationError("neighbor_graph: k1 and k2 must be >= 1");
  std::string key = normalize_term(target);
  if (key.empty()) key = std::string(target);
  model.vocab().require(key);
  const std::size_t others = model.vocab().size() - 1;

  auto qualifies = [&](const std::string& term) {
    const auto s = index.stats(term);
    return s.total >= cfg.min_support && s.affinity() >= cfg.affinity_min;
  };

  NeighborGraph g;
  g.target = key;
  g.nodes.push_back({key, 0, index.stats(key).affinity()});
  std::unordered_map<std::string, std::size_t> node_of{{key, 0}};
  std::set<std::pair<std::string, std::string>> edge_seen;
  auto add_edge = [&](const std::string& a, const std::string& b, double sim) {
    auto k = a < b ? std::pair{a, b} : std::pair{b, a};
    if (edge_seen.insert(k).second) g.edges.push_back({a, b, sim});
  };

  std::vector<std::string> first;
  if (others > 0) {
    for (const auto& nb : neighbors(model, key, others)) {
      if (first.size() >= cfg.k1) break;
      if (!qualifies(nb.term)) continue;
      first.push_back(nb.term);
      node_of.emplace(nb.term, g.nodes.size());
      g.nodes.push_back({nb.term, 1, index.stats(nb.term).affinity()});
      add_edge(key, nb.term, nb.similarity);
    }
  }
  for (const auto& f : first) {
    std::size_t taken = 0;
    for (const auto& nb : neighbors(model, f, others)) {
      if (taken >= cfg.k2) break;
      if (nb.term == key || !qualifies(nb.term)) continue;
      ++taken;
      if (node_of.find(nb.term) == node_of.end()) {
        node_of.emplace(nb.term, g.nodes.size());
        g.nodes.push_back({nb.term, 2, index.stats(nb.term).affinity()});
      }
      add_edge(f, nb.term, nb.similarity);
    }
  }
  if (first.empty()) warn("neighbor_graph: no qualifying neighbors for '" + key + "'");
  return g;
}

// ---------------------------------------------------------------------------
// Temporal series

struct TemporalRow {
  std::string date;  // UTC, YYYY-MM-DD
  std::uint64_t total = 0;
  std::uint64_t antisocial = 0;
  double proportion = 0.0;
  bool spike = false;

  friend bool operator==(const TemporalRow&, const TemporalRow&) = default;
};

struct TemporalSeries {
  std::vector<TemporalRow> rows;  // ascending date, only days with tweets

  friend bool operator==(const TemporalSeries&, const TemporalSeries&) = default;
};

struct DatedLabel {
  std::int64_t created_at = 0;
  Label label = Label::kNormal;
};

inline TemporalSeries temporal_series(std::span<const DatedLabel> annotations) {
  if (annotations.empty()) throw ValidationError("temporal_series: no annotations");
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> days;
  for (const auto& a : annotations) {
    auto& [total, anti] = days[timeutil::utc_day(a.created_at)];
    ++total;
    if (a.label == Label::kAntisocial) ++anti;
  }
  TemporalSeries s;
  for (const auto& [day, counts] : days) {
    TemporalRow row;
    row.date = timeutil::format_date(day * 86400);
    row.total = counts.first;
    row.antisocial = counts.second;
    row.proportion = static_cast<double>(row.antisocial) / static_cast<double>(row.total);
    s.rows.push_back(std::move(row));
  }
  return s;
}

/// Flags a day when its proportion exceeds mean + k * stddev (population) of
/// the `window` preceding rows. The first `window` rows are never flagged.
inline TemporalSeries detect_spikes(TemporalSeries series, double k = 2.0, std::size_t window = 7) {
  if (window < 3) throw ValidationError("detect_spikes: window must be >= 3");
  if (!(k > 0.0)) throw ValidationError("detect_spikes: k must be > 0");
  for (auto& r : series.rows) r.spike = false;
  if (series.rows.size() <= window) {
    warn("detect_spikes: series has " + std::to_string(series.rows.size()) + " rows, window is " +
         std::to_string(window) + "; nothing flagged");
    return series;
  }
  for (std::size_t i = window; i < series.rows.size(); ++i) {
    double lo = series.rows[i - window].proportion;
    double hi = lo;
    double sum = 0.0;
    for (std::size_t j = i - window; j < i; ++j) {
      lo = std::min(lo, series.rows[j].proportion);
      hi = std::max(hi, series.rows[j].proportion);
      sum += series.rows[j].proportion;
    }
    double mean = sum / static_cast<double>(window);
    double sd = 0.0;
    if (lo == hi) {
      mean = lo;  // constant window: exact mean, zero spread
    } else {
      double ss = 0.0;
      for (std::size_t j = i - window; j < i; ++j) {
        const double d = series.rows[j].proportion - mean;
        ss += d * d;
      }
      sd = std::sqrt(ss / static_cast<double>(window));
    }
    series.rows[i].spike = series.rows[i].proportion > mean + k * sd;
  }
  return series;
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { kCsv, kJson, kDot };

inline ExportFormat parse_format(std::string_view s) {
  if (s == "csv") return ExportFormat::kCsv;
  if (s == "json") return ExportFormat::kJson;
  if (s == "dot") return ExportFormat::kDot;
  throw UnsupportedFormat("unsupported export format '" + std::string(s) + "'");
}

inline std::string_view extension(ExportFormat f) {
  switch (f) {
    case ExportFormat::kCsv: return "csv";
    case ExportFormat::kJson: return "json";
    case ExportFormat::kDot: return "dot";
  }
  return "csv";
}

inline nlohmann::json to_json(const NgramTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"ngram", r.ngram}, {"count", r.count}});
  return {{"n", t.n}, {"rows", rows}};
}

inline NgramTable ngram_table_from_json(const nlohmann::json& j) {
  NgramTable t;
  t.n = j.at("n").get<std::uint32_t>();
  for (const auto& r : j.at("rows")) t.rows.push_back({r.at("ngram").get<std::string>(), r.at("count").get<std::uint64_t>()});
  return t;
}

inline nlohmann::json to_json(const TemporalSeries& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"date", r.date},
                    {"total", r.total},
                    {"antisocial", r.antisocial},
                    {"proportion", r.proportion},
                    {"spike", r.spike}});
  }
  return {{"rows", rows}};
}

inline TemporalSeries temporal_series_from_json(const nlohmann::json& j) {
  TemporalSeries s;
  for (const auto& r : j.at("rows")) {
    s.rows.push_back({r.at("date").get<std::string>(), r.at("total").get<std::uint64_t>(),
                      r.at("antisocial").get<std::uint64_t>(), r.at("proportion").get<double>(),
                      r.at("spike").get<bool>()});
  }
  return s;
}

inline nlohmann::json to_json(const NeighborGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : g.nodes) nodes.push_back({{"term", n.term}, {"order", n.order}, {"affinity", n.affinity}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"similarity", e.similarity}});
  return {{"target", g.target}, {"nodes", nodes}, {"edges", edges}};
}

inline NeighborGraph neighbor_graph_from_json(const nlohmann::json& j) {
  NeighborGraph g;
  g.target = j.at("target").get<std::string>();
  for (const auto& n : j.at("nodes")) {
    g.nodes.push_back({n.at("term").get<std::string>(), n.at("order").get<std::uint32_t>(), n.at("affinity").get<double>()});
  }
  for (const auto& e : j.at("edges")) {
    g.edges.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.at("similarity").get<double>()});
  }
  return g;
}

namespace detail {

inline std::string dot_id(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline std::string export_table(const NgramTable& t, ExportFormat f) {
  switch (f) {
    case ExportFormat::kCsv: {
      std::string out = "n,ngram,count\n";
      for (const auto& r : t.rows) {
        out += std::to_string(t.n) + "," + detail::csv_field(r.ngram) + "," + std::to_string(r.count) + "\n";
      }
      return out;
    }
    case ExportFormat::kJson:
      return to_json(t).dump(2) + "\n";
    case ExportFormat::kDot:
      break;
  }
  throw UnsupportedFormat("n-gram tables export as csv or json only");
}

inline std::string export_series(const TemporalSeries& s, ExportFormat f) {
  switch (f) {
    case ExportFormat::kCsv: {
      std::string out = "date,total,antisocial,proportion,spike\n";
      for (const auto& r : s.rows) {
        out += r.date + "," + std::to_string(r.total) + "," + std::to_string(r.antisocial) + "," +
               detail::format_double(r.proportion) + "," + (r.spike ? "true" : "false") + "\n";
      }
      return out;
    }
    case ExportFormat::kJson:
      return to_json(s).dump(2) + "\n";
    case ExportFormat::kDot:
      break;
  }
  throw UnsupportedFormat("temporal series export as csv or json only");
}

/// CSV is the edge list (a,b,similarity). DOT nodes carry order and affinity;
/// edge `len` is 1 - similarity for distance-based layouts.
inline std::string export_graph(const NeighborGraph& g, ExportFormat f) {
  switch (f) {
    case ExportFormat::kCsv: {
      std::string out = "a,b,similarity\n";
      for (const auto& e : g.edges) {
        out += detail::csv_field(e.a) + "," + detail::csv_field(e.b) + "," + detail::format_double(e.similarity) + "\n";
      }
      return out;
    }
    case ExportFormat::kJson:
      return to_json(g).dump(2) + "\n";
    case ExportFormat::kDot: {
      static constexpr const char* kShapes[] = {"box", "diamond", "circle"};
      std::string out = "graph neighbors {\n";
      out += "  label=" + detail::dot_id(g.target) + ";\n";
      for (const auto& n : g.nodes) {
        out += "  " + detail::dot_id(n.term) + " [order=" + std::to_string(n.order) +
               ", affinity=" + detail::format_double(n.affinity) + ", shape=" + kShapes[std::min<std::uint32_t>(n.order, 2)] +
               "];\n";
      }
      for (const auto& e : g.edges) {
        out += "  " + detail::dot_id(e.a) + " -- " + detail::dot_id(e.b) +
               " [similarity=" + detail::format_double(e.similarity) +
               ", len=" + detail::format_double(1.0 - e.similarity) + "];\n";
      }
      out += "}\n";
      return out;
    }
  }
  throw UnsupportedFormat("unknown export format");
}

}  // namespace asb

#endif  // ASB_ANALYSIS_HPP_
