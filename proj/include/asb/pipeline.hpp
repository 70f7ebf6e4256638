#ifndef ASB_PIPELINE_HPP_
#define ASB_PIPELINE_HPP_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "asb/analysis.hpp"
#include "asb/combiner.hpp"
#include "asb/config.hpp"
#include "asb/corpus.hpp"
#include "asb/embedding.hpp"
#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/lexicon.hpp"
#include "asb/matcher.hpp"
#include "asb/parallel.hpp"
#include "asb/toxicity.hpp"

namespace asb::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kApiKeyEnv = "SCORER_API_KEY";

struct RunOptions {
  std::optional<std::size_t> limit;
  std::size_t batch = 4096;
};

namespace detail {

inline void require_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw ValidationError(std::string(what) + " not found: " + p.string());
}

inline std::vector<TweetRecord> load_records(const PipelineConfig& cfg, const RunOptions& opts) {
  require_file(cfg.paths.record_store, "record store");
  auto records = read_record_store(cfg.paths.record_store);
  if (opts.limit && records.size() > *opts.limit) records.resize(*opts.limit);
  return records;
}

/// Reads an append-only JSONL store. A torn final line (from an interrupted
/// run) is dropped with a warning; garbage anywhere else is an error.
inline std::vector<nlohmann::json> read_store(const fs::path& path) {
  std::vector<nlohmann::json> out;
  if (!fs::exists(path)) return out;
  auto lines = io::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (asb::detail::is_blank(lines[i])) continue;
    auto j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id")) {
      if (i + 1 == lines.size()) {
        warn("dropping incomplete trailing line in " + path.string());
        continue;
      }
      throw ValidationError("store '" + path.string() + "' line " + std::to_string(i + 1) + " is malformed");
    }
    out.push_back(std::move(j));
  }
  return out;
}

inline std::string join_lines(const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out.push_back('\n');
  }
  return out;
}

/// Append handle for a store that was first rewritten cleanly.
class StoreAppender {
 public:
  StoreAppender(const fs::path& path, const std::vector<nlohmann::json>& existing) {
    io::write_atomic(path, join_lines(existing));
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot append to '" + path.string() + "'");
  }

  void append(const std::vector<nlohmann::json>& rows) {
    const std::string chunk = join_lines(rows);
    out_.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    out_.flush();
    if (!out_) throw IoError("append failed");
  }

 private:
  std::ofstream out_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// ingest

inline IngestReport run_ingest(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  if (cfg.paths.corpus_inputs.empty()) throw ValidationError("no corpus inputs configured");
  for (const auto& p : cfg.paths.corpus_inputs) detail::require_file(p, "corpus input");
  Ingester ingester(cfg.filters, cfg.workers);
  std::size_t budget = opts.limit.value_or(SIZE_MAX);
  for (const auto& p : cfg.paths.corpus_inputs) {
    if (budget == 0) break;
    io::LineReader reader(p);
    std::vector<std::string> batch;
    std::string line;
    while (budget > 0 && reader.next(line)) {
      batch.push_back(std::move(line));
      --budget;
      if (batch.size() >= opts.batch) {
        ingester.feed(batch);
        batch.clear();
      }
    }
    ingester.feed(batch);
  }
  auto result = ingester.take();
  write_record_store(cfg.paths.record_store, std::move(result.records));
  return result.report;
}

// ---------------------------------------------------------------------------
// build-lexicon

struct LexiconBuildReport {
  std::size_t merged = 0;
  std::size_t after_stoplist = 0;
  std::size_t after_frequency = 0;
};

inline LexiconBuildReport run_build_lexicon(const PipelineConfig& cfg) {
  if (cfg.paths.lexicon_files.empty()) throw ValidationError("no lexicon files configured");
  for (const auto& f : cfg.paths.lexicon_files) detail::require_file(f.path, "lexicon file");
  LexiconBuildReport rep;
  LexiconSet lex = merge_sources(cfg.paths.lexicon_files, "basic");
  rep.merged = lex.size();
  if (cfg.paths.stoplist) {
    detail::require_file(*cfg.paths.stoplist, "stoplist");
    lex = apply_stoplist(lex, read_term_list(*cfg.paths.stoplist));
  }
  rep.after_stoplist = lex.size();
  if (!cfg.paths.reference_corpus.empty()) {
    detail::require_file(cfg.paths.reference_corpus, "reference corpus");
    const auto ref = read_reference_corpus(cfg.paths.reference_corpus);
    lex = frequency_filter(lex, ref, cfg.thresholds.lexicon_min_count);
  } else {
    warn("no reference corpus configured; skipping frequency filter");
  }
  rep.after_frequency = lex.size();
  if (lex.empty()) throw ValidationError("basic lexicon is empty after filtering");
  lex.set_name("basic");
  save_lexicon(cfg.paths.basic_lexicon, lex);
  return rep;
}

// ---------------------------------------------------------------------------
// train-embedding / expand-lexicon

inline std::vector<TokenSequence> tokenize_records(std::span<const TweetRecord> records, unsigned workers) {
  std::vector<TokenSequence> out(records.size());
  parallel_shards(records.size(), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = normalize(records[i].text, records[i].id);
  });
  return out;
}

inline EmbeddingModel run_train(const PipelineConfig& cfg, const RunOptions& opts = {},
                                const EpochCallback& on_epoch = {}) {
  const auto records = detail::load_records(cfg, opts);
  const auto corpus = tokenize_records(records, cfg.workers);
  EmbeddingModel model = train(corpus, cfg.train, on_epoch);
  save_model(cfg.paths.model, model);
  return model;
}

inline LexiconSet run_expand(const PipelineConfig& cfg) {
  detail::require_file(cfg.paths.model, "embedding model");
  detail::require_file(cfg.paths.basic_lexicon, "basic lexicon");
  const auto model = load_model(cfg.paths.model);
  const auto basic = load_lexicon(cfg.paths.basic_lexicon);
  LexiconSet extended = expand_lexicon(model, basic, cfg.thresholds.similarity);
  save_lexicon(cfg.paths.extended_lexicon, extended);
  return extended;
}

// ---------------------------------------------------------------------------
// annotate (lexicon method)

struct StageCounts {
  std::size_t processed = 0;  // newly written this run
  std::size_t skipped = 0;    // already present from an earlier run
  std::size_t failed = 0;     // left for a later run
};

inline LexiconSet active_lexicon(const PipelineConfig& cfg) {
  detail::require_file(cfg.paths.basic_lexicon, "basic lexicon");
  const LexiconSet basic = load_lexicon(cfg.paths.basic_lexicon);
  if (!fs::exists(cfg.paths.extended_lexicon)) {
    warn("extended lexicon not found; matching with the basic lexicon only");
    return basic;
  }
  const LexiconSet extended = load_lexicon(cfg.paths.extended_lexicon);
  const LexiconSet* sets[] = {&basic, &extended};
  return union_lexicons(sets, "merged");
}

inline StageCounts run_annotate(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  const auto records = detail::load_records(cfg, opts);
  const auto automaton = compile(active_lexicon(cfg));
  auto existing = detail::read_store(cfg.paths.lexicon_store);
  std::unordered_set<std::string> done;
  for (const auto& j : existing) done.insert(j.at("id").get<std::string>());
  detail::StoreAppender out(cfg.paths.lexicon_store, existing);

  StageCounts counts;
  std::vector<const TweetRecord*> todo;
  for (const auto& r : records) {
    if (done.count(r.id)) {
      ++counts.skipped;
    } else {
      todo.push_back(&r);
    }
  }
  for (std::size_t start = 0; start < todo.size(); start += opts.batch) {
    const std::size_t n = std::min(opts.batch, todo.size() - start);
    std::vector<nlohmann::json> rows(n);
    parallel_shards(n, cfg.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const TweetRecord& r = *todo[start + i];
        const auto m = automaton.annotate(normalize(r.text, r.id));
        rows[i] = {{"id", r.id}, {"matched_terms", m.matched_terms}};
      }
    });
    out.append(rows);
    counts.processed += n;
  }
  return counts;
}

// ---------------------------------------------------------------------------
// score (toxicity method)

using ScoreFn = std::function<ToxicityScore(const TweetRecord&)>;

inline ScorerConfig scorer_config(const PipelineConfig& cfg) {
  ScorerConfig sc;
  sc.endpoint_url = cfg.scorer.endpoint_url;
  sc.max_qps = cfg.scorer.max_qps;
  sc.max_retries = cfg.scorer.max_retries;
  sc.timeout = cfg.scorer.timeout;
  sc.threshold = cfg.thresholds.toxicity;
  sc.cache_path = cfg.paths.cache;
  if (const char* key = std::getenv(kApiKeyEnv)) sc.api_key = key;
  return sc;
}

/// Scores every record missing from the score store. Records whose scoring
/// fails are reported, not persisted, and retried on the next run.
inline StageCounts run_score(const PipelineConfig& cfg, const ScoreFn& scorer, const RunOptions& opts = {}) {
  const auto records = detail::load_records(cfg, opts);
  auto existing = detail::read_store(cfg.paths.score_store);
  std::unordered_set<std::string> done;
  for (const auto& j : existing) done.insert(j.at("id").get<std::string>());
  detail::StoreAppender out(cfg.paths.score_store, existing);

  StageCounts counts;
  std::vector<const TweetRecord*> todo;
  for (const auto& r : records) {
    if (done.count(r.id)) {
      ++counts.skipped;
    } else {
      todo.push_back(&r);
    }
  }
  for (std::size_t start = 0; start < todo.size(); start += opts.batch) {
    const std::size_t n = std::min(opts.batch, todo.size() - start);
    std::vector<std::optional<ToxicityScore>> results(n);
    std::vector<std::string> errors(n);
    parallel_shards(n, cfg.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        try {
          results[i] = scorer(*todo[start + i]);
        } catch (const ScorerError& ex) {
          errors[i] = ex.what();
        }
      }
    });
    std::vector<nlohmann::json> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (!results[i]) {
        warn("record " + todo[start + i]->id + " left unscored: " + errors[i]);
        ++counts.failed;
        continue;
      }
      rows.push_back({{"id", todo[start + i]->id},
                      {"score", results[i]->score},
                      {"scorer", std::string(to_string(results[i]->scorer))}});
      ++counts.processed;
    }
    out.append(rows);
  }
  return counts;
}

inline StageCounts run_score(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  if (cfg.scorer.mode == ScorerMode::kStub) {
    return run_score(cfg, [](const TweetRecord& r) { return score_stub(r.text, r.id); }, opts);
  }
  auto sc = scorer_config(cfg);
  if (sc.api_key.empty()) throw ValidationError(std::string("remote scoring needs ") + kApiKeyEnv + " to be set");
  RemoteScorer client(std::move(sc));
  return run_score(cfg, [&](const TweetRecord& r) { return client.score(r.text, r.id); }, opts);
}

// ---------------------------------------------------------------------------
// combine / report

inline std::vector<AnnotationRecord> run_combine(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  const auto lex_rows = detail::read_store(cfg.paths.lexicon_store);
  if (lex_rows.empty()) throw ValidationError("no annotations");
  std::unordered_map<std::string, std::vector<std::string>> matched;
  for (const auto& j : lex_rows) {
    matched[j.at("id").get<std::string>()] = j.at("matched_terms").get<std::vector<std::string>>();
  }
  std::unordered_map<std::string, double> scores;
  for (const auto& j : detail::read_store(cfg.paths.score_store)) {
    scores[j.at("id").get<std::string>()] = j.at("score").get<double>();
  }
  const auto records = detail::load_records(cfg, opts);
  std::vector<AnnotationRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto it = matched.find(r.id);
    if (it == matched.end()) continue;
    std::optional<double> score;
    if (auto s = scores.find(r.id); s != scores.end()) score = s->second;
    out.push_back(make_annotation(r.id, it->second, score, cfg.thresholds.toxicity));
  }
  if (out.empty()) throw ValidationError("no annotations");
  io::write_atomic(cfg.paths.annotation_store, serialize_annotations(out));
  return out;
}

inline SummaryTable run_report(const PipelineConfig& cfg) {
  detail::require_file(cfg.paths.annotation_store, "annotation store");
  const auto annotations = read_annotations(cfg.paths.annotation_store);
  if (annotations.empty()) throw ValidationError("no annotations");
  SummaryTable t = summarize(annotations);
  io::write_atomic(cfg.paths.report, summary_csv(t));
  return t;
}

// ---------------------------------------------------------------------------
// analyze

inline std::vector<LabeledTokens> labeled_records(const PipelineConfig& cfg, const RunOptions& opts = {}) {
  detail::require_file(cfg.paths.annotation_store, "annotation store");
  std::unordered_map<std::string, Label> labels;
  for (const auto& a : read_annotations(cfg.paths.annotation_store)) labels[a.source_id] = a.combined_label;
  const auto records = detail::load_records(cfg, opts);
  std::vector<LabeledTokens> out;
  for (const auto& r : records) {
    auto it = labels.find(r.id);
    if (it == labels.end()) continue;
    out.push_back({r.id, r.created_at, normalize(r.text, r.id).tokens, it->second});
  }
  if (out.empty()) throw ValidationError("no annotations");
  return out;
}

struct AnalysisOutput {
  fs::path path;
  std::string contents;
};

inline AnalysisOutput run_analyze_ngram(const PipelineConfig& cfg, ExportFormat format, const RunOptions& opts = {}) {
  const auto records = labeled_records(cfg, opts);
  auto exclusions = default_exclusions(cfg.filters.keywords);
  for (const auto& e : cfg.analysis.extra_exclusions) exclusions.insert(e);
  const auto table = ngram_counts(records, cfg.analysis.ngram_n, cfg.analysis.top_k, exclusions);
  AnalysisOutput out;
  out.path = cfg.paths.analysis_dir /
             ("ngrams_" + std::to_string(cfg.analysis.ngram_n) + "." + std::string(extension(format)));
  out.contents = export_table(table, format);
  io::write_atomic(out.path, out.contents);
  return out;
}

inline std::vector<AnalysisOutput> run_analyze_graph(const PipelineConfig& cfg, ExportFormat format,
                                                     const RunOptions& opts = {}) {
  detail::require_file(cfg.paths.model, "embedding model");
  const auto model = load_model(cfg.paths.model);
  const auto records = labeled_records(cfg, opts);
  const AffinityIndex index(records);
  std::vector<AnalysisOutput> outs;
  for (const auto& target : cfg.analysis.targets) {
    const auto graph = neighbor_graph(model, target, cfg.analysis.graph, index);
    AnalysisOutput out;
    out.path = cfg.paths.analysis_dir / ("graph_" + normalize_term(target) + "." + std::string(extension(format)));
    out.contents = export_graph(graph, format);
    io::write_atomic(out.path, out.contents);
    outs.push_back(std::move(out));
  }
  return outs;
}

inline AnalysisOutput run_analyze_temporal(const PipelineConfig& cfg, ExportFormat format,
                                           const RunOptions& opts = {}) {
  const auto records = labeled_records(cfg, opts);
  std::vector<DatedLabel> dated;
  dated.reserve(records.size());
  for (const auto& r : records) dated.push_back({r.created_at, r.label});
  const auto series = detect_spikes(temporal_series(dated), cfg.analysis.spike_k, cfg.analysis.spike_window);
  AnalysisOutput out;
  out.path = cfg.paths.analysis_dir / ("temporal." + std::string(extension(format)));
  out.contents = export_series(series, format);
  io::write_atomic(out.path, out.contents);
  return out;
}

}  // namespace asb::pipeline

#endif  // ASB_PIPELINE_HPP_
