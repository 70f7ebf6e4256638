#ifndef ASB_CONFIG_HPP_
#define ASB_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asb/analysis.hpp"
#include "asb/corpus.hpp"
#include "asb/embedding.hpp"
#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/lexicon.hpp"
#include "asb/toxicity.hpp"

namespace asb {

namespace fs = std::filesystem;

struct PipelinePaths {
  std::vector<fs::path> corpus_inputs;
  fs::path record_store = "out/records.jsonl";
  std::vector<TermListFile> lexicon_files;
  std::optional<fs::path> stoplist;
  fs::path reference_corpus;
  fs::path basic_lexicon = "out/basic_lexicon.json";
  fs::path extended_lexicon = "out/extended_lexicon.json";
  fs::path model = "out/model.bin";
  fs::path lexicon_store = "out/lexicon_annotations.jsonl";
  fs::path score_store = "out/scores.jsonl";
  fs::path annotation_store = "out/annotations.jsonl";
  std::optional<fs::path> cache;
  fs::path report = "out/report.csv";
  fs::path analysis_dir = "out/analysis";
};

struct Thresholds {
  double similarity = 0.7;
  double toxicity = 0.5;
  std::uint64_t lexicon_min_count = 5;
};

enum class ScorerMode { kStub, kRemote };

struct ScorerSettings {
  ScorerMode mode = ScorerMode::kStub;
  std::string endpoint_url = ScorerConfig{}.endpoint_url;
  double max_qps = 1.0;
  std::uint32_t max_retries = 5;
  double timeout = 10.0;
};

struct AnalysisSettings {
  std::uint32_t ngram_n = 1;
  std::size_t top_k = 50;
  std::vector<std::string> extra_exclusions;
  std::vector<std::string> targets = {"China", "DonaldJTrump", "Boris"};
  GraphConfig graph;
  double spike_k = 2.0;
  std::size_t spike_window = 7;
};

struct PipelineConfig {
  PipelinePaths paths;
  Thresholds thresholds;
  FilterConfig filters;
  ScorerSettings scorer;
  TrainConfig train;
  AnalysisSettings analysis;
  unsigned workers = 1;

  void validate() const {
    if (!(thresholds.similarity > 0.0 && thresholds.similarity <= 1.0)) {
      throw ValidationError("config: thresholds.similarity must lie in (0, 1]");
    }
    if (!(thresholds.toxicity >= 0.0 && thresholds.toxicity <= 1.0)) {
      throw ValidationError("config: thresholds.toxicity must lie in [0, 1]");
    }
    if (filters.keywords.empty()) throw ValidationError("config: filters.keywords is empty");
    if (!(filters.english_fallback_min_fraction >= 0.0 && filters.english_fallback_min_fraction <= 1.0)) {
      throw ValidationError("config: filters.english_fallback_min_fraction must lie in [0, 1]");
    }
    if (!(scorer.max_qps >= 1.0)) throw ValidationError("config: scorer.max_qps must be >= 1");
    if (!(scorer.timeout > 0.0)) throw ValidationError("config: scorer.timeout must be > 0");
    train.validate();
    if (analysis.ngram_n < 1 || analysis.ngram_n > 4) throw ValidationError("config: analysis.ngram_n must be in 1..4");
    if (analysis.graph.k1 < 1 || analysis.graph.k2 < 1) throw ValidationError("config: analysis k1/k2 must be >= 1");
    if (analysis.spike_window < 3) throw ValidationError("config: analysis.spike_window must be >= 3");
    if (!(analysis.spike_k > 0.0)) throw ValidationError("config: analysis.spike_k must be > 0");
    if (workers < 1) throw ValidationError("config: workers must be >= 1");
  }
};

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

inline fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace detail

/// Parses a config document. Relative paths resolve against `base_dir`
/// (normally the directory holding the config file).
inline PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  PipelineConfig c;
  c.paths.record_store = base_dir / c.paths.record_store;
  c.paths.basic_lexicon = base_dir / c.paths.basic_lexicon;
  c.paths.extended_lexicon = base_dir / c.paths.extended_lexicon;
  c.paths.model = base_dir / c.paths.model;
  c.paths.lexicon_store = base_dir / c.paths.lexicon_store;
  c.paths.score_store = base_dir / c.paths.score_store;
  c.paths.annotation_store = base_dir / c.paths.annotation_store;
  c.paths.report = base_dir / c.paths.report;
  c.paths.analysis_dir = base_dir / c.paths.analysis_dir;
  try {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      auto path_field = [&](const char* key, fs::path& out) {
        if (p.contains(key) && !p[key].is_null()) out = detail::resolve(base_dir, p[key].get<std::string>());
      };
      auto opt_path_field = [&](const char* key, std::optional<fs::path>& out) {
        if (p.contains(key) && !p[key].is_null()) out = detail::resolve(base_dir, p[key].get<std::string>());
      };
      if (p.contains("corpus_inputs")) {
        for (const auto& in : p["corpus_inputs"]) c.paths.corpus_inputs.push_back(detail::resolve(base_dir, in.get<std::string>()));
      }
      path_field("record_store", c.paths.record_store);
      if (p.contains("lexicon_files")) {
        for (const auto& f : p["lexicon_files"]) {
          TermListFile t;
          t.path = detail::resolve(base_dir, f.at("path").get<std::string>());
          t.source = parse_source(f.value("source", std::string("USER")));
          c.paths.lexicon_files.push_back(std::move(t));
        }
      }
      opt_path_field("stoplist", c.paths.stoplist);
      path_field("reference_corpus", c.paths.reference_corpus);
      path_field("basic_lexicon", c.paths.basic_lexicon);
      path_field("extended_lexicon", c.paths.extended_lexicon);
      path_field("model", c.paths.model);
      path_field("lexicon_store", c.paths.lexicon_store);
      path_field("score_store", c.paths.score_store);
      path_field("annotation_store", c.paths.annotation_store);
      opt_path_field("cache", c.paths.cache);
      path_field("report", c.paths.report);
      path_field("analysis_dir", c.paths.analysis_dir);
    }
    if (j.contains("thresholds")) {
      const auto& t = j["thresholds"];
      detail::read_opt(t, "similarity", c.thresholds.similarity);
      detail::read_opt(t, "toxicity", c.thresholds.toxicity);
      detail::read_opt(t, "lexicon_min_count", c.thresholds.lexicon_min_count);
    }
    if (j.contains("filters")) {
      const auto& f = j["filters"];
      detail::read_opt(f, "keywords", c.filters.keywords);
      detail::read_opt(f, "english_only", c.filters.english_only);
      detail::read_opt(f, "english_fallback_min_fraction", c.filters.english_fallback_min_fraction);
    }
    if (j.contains("scorer")) {
      const auto& s = j["scorer"];
      if (s.contains("api_key")) {
        throw ValidationError("config: scorer.api_key is not accepted; set SCORER_API_KEY instead");
      }
      const std::string mode = s.value("mode", std::string("stub"));
      if (mode == "stub") {
        c.scorer.mode = ScorerMode::kStub;
      } else if (mode == "remote") {
        c.scorer.mode = ScorerMode::kRemote;
      } else {
        throw ValidationError("config: scorer.mode must be 'stub' or 'remote'");
      }
      detail::read_opt(s, "endpoint_url", c.scorer.endpoint_url);
      detail::read_opt(s, "max_qps", c.scorer.max_qps);
      detail::read_opt(s, "max_retries", c.scorer.max_retries);
      detail::read_opt(s, "timeout", c.scorer.timeout);
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      detail::read_opt(t, "dim", c.train.dim);
      detail::read_opt(t, "window", c.train.window);
      detail::read_opt(t, "negatives", c.train.negatives);
      detail::read_opt(t, "epochs", c.train.epochs);
      detail::read_opt(t, "min_count", c.train.min_count);
      detail::read_opt(t, "learning_rate_initial", c.train.learning_rate_initial);
      detail::read_opt(t, "subsample_threshold", c.train.subsample_threshold);
      detail::read_opt(t, "seed", c.train.seed);
      detail::read_opt(t, "workers", c.train.workers);
    }
    if (j.contains("analysis")) {
      const auto& a = j["analysis"];
      detail::read_opt(a, "ngram_n", c.analysis.ngram_n);
      detail::read_opt(a, "top_k", c.analysis.top_k);
      detail::read_opt(a, "extra_exclusions", c.analysis.extra_exclusions);
      detail::read_opt(a, "targets", c.analysis.targets);
      detail::read_opt(a, "k1", c.analysis.graph.k1);
      detail::read_opt(a, "k2", c.analysis.graph.k2);
      detail::read_opt(a, "affinity_min", c.analysis.graph.affinity_min);
      detail::read_opt(a, "min_support", c.analysis.graph.min_support);
      detail::read_opt(a, "spike_k", c.analysis.spike_k);
      detail::read_opt(a, "spike_window", c.analysis.spike_window);
    }
    detail::read_opt(j, "workers", c.workers);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("config: ") + ex.what());
  }
  c.validate();
  return c;
}

inline PipelineConfig load_config(const fs::path& path) {
  auto j = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw ValidationError("config file is not valid JSON: " + path.string());
  return config_from_json(j, fs::absolute(path).parent_path());
}

/// Serializes with absolute paths, so the output re-parses to an equal config
/// regardless of where it is read from.
inline nlohmann::json to_json(const PipelineConfig& c) {
  auto str = [](const fs::path& p) { return fs::absolute(p).lexically_normal().string(); };
  auto opt = [&](const std::optional<fs::path>& p) { return p ? nlohmann::json(str(*p)) : nlohmann::json(nullptr); };
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : c.paths.corpus_inputs) inputs.push_back(str(p));
  nlohmann::json lex = nlohmann::json::array();
  for (const auto& f : c.paths.lexicon_files) lex.push_back({{"path", str(f.path)}, {"source", std::string(to_string(f.source))}});
  nlohmann::json j;
  j["paths"] = {{"corpus_inputs", inputs},
                {"record_store", str(c.paths.record_store)},
                {"lexicon_files", lex},
                {"stoplist", opt(c.paths.stoplist)},
                {"reference_corpus", c.paths.reference_corpus.empty() ? nlohmann::json(nullptr) : nlohmann::json(str(c.paths.reference_corpus))},
                {"basic_lexicon", str(c.paths.basic_lexicon)},
                {"extended_lexicon", str(c.paths.extended_lexicon)},
                {"model", str(c.paths.model)},
                {"lexicon_store", str(c.paths.lexicon_store)},
                {"score_store", str(c.paths.score_store)},
                {"annotation_store", str(c.paths.annotation_store)},
                {"cache", opt(c.paths.cache)},
                {"report", str(c.paths.report)},
                {"analysis_dir", str(c.paths.analysis_dir)}};
  j["thresholds"] = {{"similarity", c.thresholds.similarity},
                     {"toxicity", c.thresholds.toxicity},
                     {"lexicon_min_count", c.thresholds.lexicon_min_count}};
  j["filters"] = {{"keywords", c.filters.keywords},
                  {"english_only", c.filters.english_only},
                  {"english_fallback_min_fraction", c.filters.english_fallback_min_fraction}};
  j["scorer"] = {{"mode", c.scorer.mode == ScorerMode::kStub ? "stub" : "remote"},
                 {"endpoint_url", c.scorer.endpoint_url},
                 {"max_qps", c.scorer.max_qps},
                 {"max_retries", c.scorer.max_retries},
                 {"timeout", c.scorer.timeout}};
  j["train"] = {{"dim", c.train.dim},
                {"window", c.train.window},
                {"negatives", c.train.negatives},
                {"epochs", c.train.epochs},
                {"min_count", c.train.min_count},
                {"learning_rate_initial", c.train.learning_rate_initial},
                {"subsample_threshold", c.train.subsample_threshold},
                {"seed", c.train.seed},
                {"workers", c.train.workers}};
  j["analysis"] = {{"ngram_n", c.analysis.ngram_n},
                   {"top_k", c.analysis.top_k},
                   {"extra_exclusions", c.analysis.extra_exclusions},
                   {"targets", c.analysis.targets},
                   {"k1", c.analysis.graph.k1},
                   {"k2", c.analysis.graph.k2},
                   {"affinity_min", c.analysis.graph.affinity_min},
                   {"min_support", c.analysis.graph.min_support},
                   {"spike_k", c.analysis.spike_k},
                   {"spike_window", c.analysis.spike_window}};
  j["workers"] = c.workers;
  return j;
}

}  // namespace asb

#endif  // ASB_CONFIG_HPP_
