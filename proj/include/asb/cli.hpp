#ifndef ASB_CLI_HPP_
#define ASB_CLI_HPP_

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asb/config.hpp"
#include "asb/error.hpp"
#include "asb/pipeline.hpp"

namespace asb::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Antisocial-content annotation pipeline over tweet corpora"};
  app.set_help_all_flag("--help-all");

  std::string config_path;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::optional<std::size_t> limit;
  std::string format = "csv";
  bool print_config = false;

  app.add_option("--config", config_path, "Pipeline config (JSON)")->required();
  app.add_option("--workers", workers, "Worker threads per stage")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Training seed");
  app.add_flag("--deterministic", deterministic, "Single worker everywhere; byte-reproducible outputs");
  app.add_option("--limit", limit, "Cap on records processed (smoke runs)");
  app.add_option("--format", format, "Export format for analyze")->check(CLI::IsMember({"csv", "json", "dot"}));
  app.add_flag("--print-config", print_config, "Print the effective config and exit");

  auto* ingest = app.add_subcommand("ingest", "Filter raw JSONL into the record store");
  auto* build_lex = app.add_subcommand("build-lexicon", "Merge, stoplist and frequency-filter term lists");
  auto* train_cmd = app.add_subcommand("train-embedding", "Train skip-gram vectors on the record store");
  auto* expand = app.add_subcommand("expand-lexicon", "Grow the basic lexicon by embedding similarity");
  auto* annotate = app.add_subcommand("annotate", "Lexicon pass over the record store (resumable)");
  auto* score = app.add_subcommand("score", "Toxicity pass over the record store (resumable)");
  auto* combine = app.add_subcommand("combine", "Join both passes into the annotation store");
  auto* report = app.add_subcommand("report", "Summary table of labels per method");
  auto* analyze = app.add_subcommand("analyze", "Exploratory analyses");
  std::string analysis_kind;
  std::optional<std::uint32_t> ngram_n;
  std::optional<std::size_t> top_k;
  std::vector<std::string> targets;
  analyze->add_option("kind", analysis_kind, "ngram | graph | temporal")
      ->required()
      ->check(CLI::IsMember({"ngram", "graph", "temporal"}));
  analyze->add_option("--n", ngram_n, "n-gram order");
  analyze->add_option("--top-k", top_k, "Rows to keep (0 = all)");
  analyze->add_option("--target", targets, "Graph target term (repeatable)");
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  struct SinkGuard {
    WarningSink previous;
    ~SinkGuard() { set_warning_sink(std::move(previous)); }
  } guard{set_warning_sink([&err](const std::string& msg) { err << "warning: " << msg << "\n"; })};

  try {
    PipelineConfig cfg = load_config(config_path);
    if (workers) {
      cfg.workers = *workers;
      cfg.train.workers = *workers;
    }
    if (seed) cfg.train.seed = *seed;
    if (deterministic) {
      cfg.workers = 1;
      cfg.train.workers = 1;
    }
    if (ngram_n) cfg.analysis.ngram_n = *ngram_n;
    if (top_k) cfg.analysis.top_k = *top_k;
    if (!targets.empty()) cfg.analysis.targets = targets;
    cfg.validate();

    if (print_config) {
      out << to_json(cfg).dump(2) << "\n";
      return kOk;
    }
    pipeline::RunOptions opts;
    opts.limit = limit;

    if (*ingest) {
      const auto r = pipeline::run_ingest(cfg, opts);
      out << "lines_read=" << r.lines_read << " kept=" << r.records_kept << " dropped_topic=" << r.records_dropped_topic
          << " dropped_lang=" << r.records_dropped_lang << " malformed=" << r.malformed_lines << "\n";
    } else if (*build_lex) {
      const auto r = pipeline::run_build_lexicon(cfg);
      out << "merged=" << r.merged << " after_stoplist=" << r.after_stoplist << " basic=" << r.after_frequency << "\n";
    } else if (*train_cmd) {
      const auto model = pipeline::run_train(cfg, opts, [&err](const EpochStats& s, const EmbeddingModel&) {
        err << "epoch " << s.epoch << " mean_pair_loss=" << s.mean_pair_loss << " pairs=" << s.pairs << "\n";
      });
      out << "vocab=" << model.vocab().size() << " dim=" << model.dim() << "\n";
    } else if (*expand) {
      const auto ext = pipeline::run_expand(cfg);
      out << "extended=" << ext.size() << "\n";
    } else if (*annotate) {
      const auto c = pipeline::run_annotate(cfg, opts);
      out << "annotated=" << c.processed << " skipped=" << c.skipped << "\n";
    } else if (*score) {
      const auto c = pipeline::run_score(cfg, opts);
      out << "scored=" << c.processed << " skipped=" << c.skipped << " unscored=" << c.failed << "\n";
    } else if (*combine) {
      const auto a = pipeline::run_combine(cfg, opts);
      out << "annotations=" << a.size() << "\n";
    } else if (*report) {
      const auto t = pipeline::run_report(cfg);
      out << summary_csv(t) << "unscored," << t.unscored << "\n";
    } else if (*analyze) {
      const auto fmt = parse_format(format);
      if (analysis_kind == "ngram") {
        out << pipeline::run_analyze_ngram(cfg, fmt, opts).path.string() << "\n";
      } else if (analysis_kind == "graph") {
        for (const auto& o : pipeline::run_analyze_graph(cfg, fmt, opts)) out << o.path.string() << "\n";
      } else {
        out << pipeline::run_analyze_temporal(cfg, fmt, opts).path.string() << "\n";
      }
    } else {
      err << "error: no subcommand given (see --help)\n";
      return kValidation;
    }
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const UnsupportedFormat& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

}  // namespace asb::cli

#endif  // ASB_CLI_HPP_
