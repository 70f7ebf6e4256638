// Acceptance suite. One line per criterion; exit status is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "asb/analysis.hpp"
#include "asb/combiner.hpp"
#include "asb/embedding.hpp"
#include "asb/lexicon.hpp"
#include "asb/matcher.hpp"
#include "asb/pipeline.hpp"
#include "asb/toxicity.hpp"
#include "e2e_support.hpp"
#include "fake_scorer.hpp"
#include "matcher_oracle.hpp"

using namespace asb;
namespace ts = testing_support;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed checks; the first few messages end up in the report line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    if (failures_ == 0) return {true, notes_};
    return {false, std::to_string(failures_) + " failed check(s): " + messages_ + (notes_.empty() ? "" : " | " + notes_)};
  }

 private:
  std::size_t failures_ = 0;
  std::string messages_;
  std::string notes_;
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream o;
  o.precision(prec);
  o << v;
  return o.str();
}

EmbeddingModel explicit_model(const std::vector<std::pair<std::string, std::vector<float>>>& rows) {
  std::vector<VocabEntry> entries;
  std::vector<float> input;
  const auto dim = static_cast<std::uint32_t>(rows.front().second.size());
  std::uint64_t freq = 100000;
  for (const auto& [term, vec] : rows) {
    entries.push_back({term, freq--});
    input.insert(input.end(), vec.begin(), vec.end());
  }
  std::vector<float> output(input.size(), 0.0f);
  return EmbeddingModel(Vocabulary(std::move(entries)), dim, std::move(input), std::move(output));
}

LexiconSet basic_of(const std::vector<std::string>& terms) {
  LexiconSet lex("basic", LexiconKind::kBasic);
  for (const auto& t : terms) lex.insert({t, static_cast<std::uint32_t>(split_term(t).size()), LexiconSource::kUser, 0});
  return lex;
}

// ---------------------------------------------------------------------------

Outcome summary_consistency() {
  Checker c;
  SummaryTable published;
  published.total = 40'385'257;
  published.lexicon = {1'169'755, 39'215'502};
  published.toxicity = {2'383'316, 38'001'941};
  published.combined = {2'659'585, 37'725'672};
  c.expect(published.consistent(), "published counts violate the bounds");
  c.expect(published.overlap() == 893'486, "published overlap != 893486");
  c.expect(published.combined.antisocial >= 2'383'316 && published.combined.antisocial <= 3'553'071,
           "combined outside [2383316, 3553071]");

  std::mt19937_64 rng(1);
  for (int round = 0; round < 300; ++round) {
    std::vector<AnnotationRecord> recs;
    const int n = static_cast<int>(rng() % 500);
    const auto p_lex = rng() % 101, p_tox = rng() % 101;
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> terms;
      if (rng() % 100 < p_lex) terms.push_back("t");
      std::optional<double> score;
      if (rng() % 20) score = (rng() % 100 < p_tox) ? 0.9 : 0.1;
      recs.push_back(make_annotation(std::to_string(i), terms, score, 0.5));
    }
    const auto t = summarize(recs);
    const auto lo = std::max(t.lexicon.antisocial, t.toxicity.antisocial);
    const auto hi = t.lexicon.antisocial + t.toxicity.antisocial;
    c.expect(lo <= t.combined.antisocial && t.combined.antisocial <= hi, "random labeling out of bounds");
    c.expect(t.consistent(), "summary inconsistent");
  }
  c.note("overlap=" + std::to_string(published.overlap()));
  return c.outcome();
}

Outcome threshold_boundaries() {
  Checker c;
  c.expect(classify(0.5) == Label::kNormal, "score 0.5 not normal");
  c.expect(classify(0.5 + 1e-9) == Label::kAntisocial, "score 0.5+1e-9 not antisocial");

  LexiconSet lex("b", LexiconKind::kBasic);
  lex.insert({"four", 1, LexiconSource::kUser, 0});
  lex.insert({"five", 1, LexiconSource::kUser, 0});
  std::vector<ReferenceRecord> ref;
  for (int i = 0; i < 5; ++i) ref.push_back({normalize(i < 4 ? "four five" : "five"), true});
  const auto kept = frequency_filter(lex, ref, 5);
  c.expect(!kept.contains("four"), "count 4 kept");
  c.expect(kept.contains("five"), "count 5 removed");

  const double target = 0.7 + 1e-6;
  const float x = static_cast<float>(std::sqrt(51.0 * target * target / (1.0 - target * target)));
  const auto m = explicit_model({{"anchor", {1, 0, 0, 0}}, {"exact", {7, 7, 1, 1}}, {"above", {x, 7, 1, 1}}});
  c.expect(similarity(m, "anchor", "exact") == 0.7, "constructed cosine is not exactly 0.7");
  c.expect(std::abs(similarity(m, "anchor", "above") - target) < 1e-7, "constructed cosine is not 0.7+1e-6");
  const auto ext = expand_lexicon(m, basic_of({"anchor"}), 0.7);
  c.expect(!ext.contains("exact"), "similarity 0.7 included");
  c.expect(ext.contains("above"), "similarity 0.7+1e-6 excluded");
  return c.outcome();
}

Outcome matcher_equivalence() {
  Checker c;
  std::mt19937_64 rng(2024);
  const auto pool = ts::word_pool(150);
  std::size_t tweets = 0, antisocial = 0, multi_hits = 0;
  for (int lex_round = 0; lex_round < 20; ++lex_round) {
    const auto terms = ts::random_lexicon(rng, pool, 300);
    const auto automaton = PatternAutomaton::compile(terms);
    for (int t = 0; t < 500; ++t, ++tweets) {
      const auto toks = ts::random_tokens(rng, pool, 30);
      const auto got = automaton.annotate(TokenSequence{toks, "x"});
      const auto want = ts::naive_matches(toks, terms);
      c.expect(got.matched_terms == want, "matched set differs from naive scan");
      c.expect(got.label == (want.empty() ? Label::kNormal : Label::kAntisocial), "label differs from naive scan");
      antisocial += !want.empty();
      for (const auto& w : want) multi_hits += w.find(' ') != std::string::npos;
    }
  }
  c.note(std::to_string(tweets) + " tweets, " + std::to_string(antisocial) + " antisocial, " +
         std::to_string(multi_hits) + " multi-token hits");

  // Throughput on a 1k-term lexicon (reported only).
  const auto big_pool = ts::word_pool(3000);
  const auto terms = ts::random_lexicon(rng, big_pool, 1000);
  const auto automaton = PatternAutomaton::compile(terms);
  std::vector<TokenSequence> stream;
  for (int i = 0; i < 100'000; ++i) {
    TokenSequence s;
    s.tokens.reserve(20);
    for (int k = 0; k < 20; ++k) s.tokens.push_back(big_pool[rng() % big_pool.size()]);
    stream.push_back(std::move(s));
  }
  std::size_t flagged = 0;
  const auto start = Clock::now();
  for (const auto& s : stream) flagged += automaton.annotate(s).label == Label::kAntisocial;
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const double rate = static_cast<double>(stream.size()) / secs;
  c.note("throughput " + fmt(rate / 1000.0, 4) + "k tweets/s on 1k terms" + (rate < 100'000 ? " (below 100k target)" : ""));
  (void)flagged;
  return c.outcome();
}

Outcome gradient_check() {
  Checker c;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd(0.0, 0.5);
  const double h = 1e-5;
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    const std::size_t dim = 5 + rng() % 46;
    const std::size_t k = 1 + rng() % 10;
    std::vector<std::vector<double>> vecs(k + 2, std::vector<double>(dim));  // center, context, negatives
    for (auto& v : vecs) {
      for (auto& x : v) x = nd(rng);
    }
    auto loss = [&] {
      std::vector<std::span<const double>> negs(vecs.begin() + 2, vecs.end());
      return sgns::pair_loss<double>(vecs[0], vecs[1], negs);
    };
    std::vector<std::span<const double>> negs(vecs.begin() + 2, vecs.end());
    std::vector<double> grad_center(dim), coef(k + 1);
    sgns::pair_gradient<double>(vecs[0], vecs[1], negs, grad_center, coef);

    double diff2 = 0.0, an2 = 0.0, nu2 = 0.0;
    for (std::size_t which = 0; which < vecs.size(); ++which) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double analytic = which == 0 ? grad_center[i] : coef[which - 1] * vecs[0][i];
        const double keep = vecs[which][i];
        vecs[which][i] = keep + h;
        const double up = loss();
        vecs[which][i] = keep - h;
        const double down = loss();
        vecs[which][i] = keep;
        const double numeric = (up - down) / (2.0 * h);
        diff2 += (analytic - numeric) * (analytic - numeric);
        an2 += analytic * analytic;
        nu2 += numeric * numeric;
      }
    }
    const double rel = std::sqrt(diff2) / std::max({std::sqrt(an2), std::sqrt(nu2), 1e-300});
    worst = std::max(worst, rel);
    c.expect(rel < 1e-4, "point " + std::to_string(point) + " relative error " + fmt(rel));
  }
  c.note("max relative error " + fmt(worst));
  return c.outcome();
}

Outcome planted_semantics() {
  Checker c;
  int wins = 0;
  std::string margins;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    const auto pool = ts::word_pool(200);
    const std::vector<std::string> cues = {"cue0", "cue1", "cue2", "cue3"};
    std::vector<TokenSequence> corpus;
    for (int s = 0; s < 3000; ++s) {
      TokenSequence seq;
      for (int k = 0; k < 10; ++k) seq.tokens.push_back(pool[rng() % pool.size()]);
      if (rng() % 10 < 3) {
        // The planted words appear only inside the same cue context.
        const std::size_t at = 2 + rng() % 6;
        const bool first = rng() % 2;
        seq.tokens[at - 1] = cues[rng() % cues.size()];
        seq.tokens[at] = first ? "planted_a" : "planted_b";
        seq.tokens[at + 1] = cues[rng() % cues.size()];
      }
      corpus.push_back(std::move(seq));
    }
    TrainConfig cfg;
    cfg.dim = 32;
    cfg.window = 2;
    cfg.negatives = 5;
    cfg.epochs = 5;
    cfg.min_count = 1;
    cfg.subsample_threshold = 0.0;
    cfg.seed = seed;
    const auto model = train(corpus, cfg);
    const auto& a = pool[rng() % pool.size()];
    std::string b = a;
    while (b == a) b = pool[rng() % pool.size()];
    const double planted = similarity(model, "planted_a", "planted_b");
    const double random = similarity(model, a, b);
    wins += planted > random;
    margins += (margins.empty() ? "" : " ") + fmt(planted - random, 2);
  }
  c.expect(wins >= 9, "planted pair won only " + std::to_string(wins) + "/10");
  c.note(std::to_string(wins) + "/10 seeds; margins " + margins);
  return c.outcome();
}

Outcome expansion_brute_force() {
  Checker c;
  std::mt19937_64 rng(77);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  std::size_t total_selected = 0;
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 8 + rng() % 43;
    const std::size_t dim = 2 + rng() % 4;
    std::vector<std::pair<std::string, std::vector<float>>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<float> v(dim);
      for (auto& x : v) x = nd(rng);
      rows.push_back({"w" + std::to_string(i), v});
    }
    if (dim == 4 && round % 2 == 0) {
      rows[0].second = {1, 0, 0, 0};
      rows[1].second = {7, 7, 1, 1};  // cosine exactly 0.7 with rows[0]
    }
    const auto model = explicit_model(rows);
    std::vector<std::string> basic_terms;
    const std::size_t nb = 1 + rng() % 3;
    for (std::size_t i = 0; i < nb; ++i) basic_terms.push_back(rows[rng() % n].first);
    if (round % 3 == 0) basic_terms.push_back("w0 w1");  // multi-token entries never anchor
    const auto basic = basic_of(basic_terms);

    std::set<std::string> want;
    for (std::size_t i = 0; i < n; ++i) {
      if (basic.contains(rows[i].first)) continue;
      for (const auto& anchor : basic_terms) {
        if (anchor.find(' ') != std::string::npos) continue;
        const auto& u = rows[i].second;
        const auto& v = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.first == anchor; })->second;
        long double dot = 0, nu = 0, nv = 0;
        for (std::size_t d = 0; d < dim; ++d) {
          dot += static_cast<long double>(u[d]) * v[d];
          nu += static_cast<long double>(u[d]) * u[d];
          nv += static_cast<long double>(v[d]) * v[d];
        }
        if (nu > 0 && nv > 0 && dot / std::sqrt(nu * nv) > 0.7L) want.insert(rows[i].first);
      }
    }
    const auto got = expand_lexicon(model, basic, 0.7).terms();
    c.expect(std::vector<std::string>(want.begin(), want.end()) == got,
             "round " + std::to_string(round) + " differs from exhaustive filter");
    total_selected += got.size();
  }
  c.note("200 models, " + std::to_string(total_selected) + " expansions");
  return c.outcome();
}

struct E2eRun {
  ts::TempDir dir;
  fs::path config;
  ts::CliResult result;
};

E2eRun& e2e_run(int which) {
  static std::vector<std::unique_ptr<E2eRun>> runs;
  while (static_cast<int>(runs.size()) <= which) {
    auto r = std::make_unique<E2eRun>();
    r->config = ts::stage_e2e(r->dir.path());
    r->result = ts::run_pipeline(r->config);
    if (r->result.code == 0) {
      for (const char* fmt : {"json", "dot"}) {
        auto extra = ts::run_cli({"--config", r->config.string(), "--deterministic", "--format", fmt, "analyze", "graph"});
        if (extra.code != 0) r->result = extra;
      }
      auto extra = ts::run_cli({"--config", r->config.string(), "--deterministic", "--format", "json", "analyze", "temporal"});
      if (extra.code != 0) r->result = extra;
    }
    runs.push_back(std::move(r));
  }
  return *runs[static_cast<std::size_t>(which)];
}

Outcome end_to_end() {
  Checker c;
  auto& run = e2e_run(0);
  c.expect(run.result.code == 0, "pipeline failed: " + run.result.err);
  if (run.result.code != 0) return c.outcome();
  const auto cfg = load_config(run.config);

  std::map<std::string, std::string> expected;
  for (const auto& j : ts::read_jsonl(ts::fixture("e2e/expected_labels.jsonl"))) expected[j["id"]] = j["combined_label"];
  const auto annotations = read_annotations(cfg.paths.annotation_store);
  std::size_t agree = 0;
  for (const auto& a : annotations) {
    auto it = expected.find(a.source_id);
    if (it != expected.end() && it->second == to_string(a.combined_label)) ++agree;
  }
  c.expect(annotations.size() == expected.size(), "annotated " + std::to_string(annotations.size()) + " of " +
                                                      std::to_string(expected.size()));
  c.expect(agree == expected.size(), "label agreement " + std::to_string(agree) + "/" + std::to_string(expected.size()));

  const auto series = nlohmann::json::parse(ts::slurp(cfg.paths.analysis_dir / "temporal.json"))["rows"];
  const auto reference = ts::read_json(ts::fixture("e2e/expected_temporal.json"));
  bool same = series.size() == reference.size();
  for (std::size_t i = 0; same && i < series.size(); ++i) {
    same = series[i]["date"] == reference[i]["date"] && series[i]["total"] == reference[i]["total"] &&
           series[i]["antisocial"] == reference[i]["antisocial"] &&
           series[i]["proportion"].get<double>() == reference[i]["proportion"].get<double>();
  }
  c.expect(same, "temporal series differs from the groupby-date reference");
  c.note(std::to_string(agree) + "/" + std::to_string(expected.size()) + " labels, " + std::to_string(series.size()) +
         " days");
  return c.outcome();
}

Outcome spike_detection() {
  Checker c;
  auto series_of = [](const std::vector<double>& props) {
    TemporalSeries s;
    for (std::size_t i = 0; i < props.size(); ++i) s.rows.push_back({"d" + std::to_string(i), 100, 0, props[i], false});
    return s;
  };
  for (double v : {0.0, 0.05, 0.07, 0.1, 0.3, 1.0}) {
    for (std::size_t len : {8u, 30u, 100u}) {
      const auto s = detect_spikes(series_of(std::vector<double>(len, v)), 2.0, 7);
      for (const auto& r : s.rows) c.expect(!r.spike, "constant series " + fmt(v) + " flagged");
    }
  }
  std::vector<double> p(7, 0.05);
  p.push_back(0.20);
  const auto s = detect_spikes(series_of(p), 2.0, 7);
  for (std::size_t i = 0; i < 7; ++i) c.expect(!s.rows[i].spike, "baseline day flagged");
  c.expect(s.rows[7].spike, "final day not flagged");
  return c.outcome();
}

Outcome determinism() {
  Checker c;
  auto& a = e2e_run(0);
  auto& b = e2e_run(1);
  c.expect(a.result.code == 0 && b.result.code == 0, "pipeline failed");
  if (!c.outcome().pass) return c.outcome();
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(a.dir / "out")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.dir.path());
    c.expect(fs::exists(b.dir.path() / rel), rel.string() + " missing in second run");
    c.expect(ts::slurp(e.path()) == ts::slurp(b.dir.path() / rel), rel.string() + " differs between runs");
    ++compared;
  }
  for (const char* must : {"out/annotations.jsonl", "out/model.bin", "out/analysis/ngrams_1.csv",
                           "out/analysis/temporal.csv", "out/analysis/graph_kungflu.dot"}) {
    c.expect(fs::exists(a.dir / must), std::string(must) + " not produced");
  }

  // A freshly trained in-memory model and the persisted file give bit-identical similarities.
  const auto cfg = load_config(a.config);
  const auto records = read_record_store(cfg.paths.record_store);
  const auto fresh = train(pipeline::tokenize_records(records, 1), cfg.train);
  const auto loaded = load_model(cfg.paths.model);
  c.expect(serialize_model(fresh) == ts::slurp(cfg.paths.model), "re-serialized model differs from file");
  std::size_t pairs = 0;
  bool identical = fresh.vocab().size() == loaded.vocab().size();
  for (std::size_t i = 0; identical && i < fresh.vocab().size(); ++i) {
    for (std::size_t j = 0; j < fresh.vocab().size(); ++j, ++pairs) {
      const double x = fresh.similarity_at(i, j), y = loaded.similarity_at(i, j);
      if (std::memcmp(&x, &y, sizeof x) != 0) identical = false;
    }
  }
  c.expect(identical, "similarity after reload is not bit-identical");
  c.note(std::to_string(compared) + " files, " + std::to_string(pairs) + " similarity pairs");
  return c.outcome();
}

Outcome scorer_protocol() {
  Checker c;
  using ts::FakeScorer;
  auto config_for = [](const FakeScorer& s) {
    ScorerConfig cfg;
    cfg.endpoint_url = s.url();
    cfg.api_key = "acceptance";
    cfg.max_qps = 100;
    cfg.timeout = 2.0;
    return cfg;
  };

  {  // request shape and summary-score parsing
    FakeScorer server;
    server.push({200, FakeScorer::score_body(0.8125), {}});
    RemoteScorer client(config_for(server));
    const auto s = client.score("you are \"great\"", "r1");
    c.expect(s.score == 0.8125 && s.scorer == ScorerKind::kRemote, "summary score not parsed");
    const auto reqs = server.requests();
    c.expect(reqs.size() == 1, "expected exactly one request");
    if (!reqs.empty()) {
      const auto body = nlohmann::json::parse(reqs[0].body);
      const nlohmann::json want = {{"comment", {{"text", "you are \"great\""}}},
                                   {"languages", {"en"}},
                                   {"requestedAttributes", {{"TOXICITY", nlohmann::json::object()}}}};
      c.expect(body == want, "request body shape: " + reqs[0].body);
      c.expect(reqs[0].key == "acceptance", "api key not sent as query parameter");
    }
  }

  for (std::uint32_t retries : {0u, 1u, 3u, 5u}) {  // 429 backoff schedule
    FakeScorer server;
    server.set_fallback([](const std::string&) { return FakeScorer::Reply{429, "{}", {}}; });
    auto delays = std::make_shared<std::vector<double>>();
    auto cfg = config_for(server);
    cfg.max_retries = retries;
    RemoteScorer client(cfg, [delays](std::chrono::duration<double> d) { delays->push_back(d.count()); });
    bool limited = false;
    try {
      client.score("x");
    } catch (const RateLimited&) {
      limited = true;
    }
    c.expect(limited, "no RateLimited after retries exhausted");
    c.expect(server.request_count() == retries + 1, "attempts " + std::to_string(server.request_count()) +
                                                        " != retries+1 for retries=" + std::to_string(retries));
    c.expect(delays->size() == retries, "sleep count mismatch");
    for (std::size_t i = 0; i < delays->size(); ++i) {
      const double base = std::pow(2.0, static_cast<double>(i));
      c.expect((*delays)[i] >= base && (*delays)[i] < base * 1.25, "backoff delay " + fmt((*delays)[i]));
    }
  }
  {
    FakeScorer server;
    for (int i = 0; i < 2; ++i) server.push({429, "{}", {}});
    auto cfg = config_for(server);
    RemoteScorer client(cfg, [](std::chrono::duration<double>) {});
    c.expect(client.score("y").score == 0.25 && server.request_count() == 3, "recovery after 429 failed");
  }

  {  // QPS ceiling, measured at the server
    FakeScorer server;
    auto cfg = config_for(server);
    cfg.max_qps = 4;
    RemoteScorer client(cfg);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 4; ++i) client.score("q" + std::to_string(t) + "-" + std::to_string(i));
      });
    }
    for (auto& th : threads) th.join();
    auto reqs = server.requests();
    std::vector<Clock::time_point> arrivals;
    for (const auto& r : reqs) arrivals.push_back(r.arrival);
    std::sort(arrivals.begin(), arrivals.end());
    c.expect(arrivals.size() == 16, "expected 16 requests");
    std::size_t worst = 0;
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      std::size_t j = i;
      while (j < arrivals.size() && arrivals[j] - arrivals[i] < std::chrono::seconds(1)) ++j;
      worst = std::max(worst, j - i);
    }
    c.expect(worst <= 4, "saw " + std::to_string(worst) + " requests within one second");
    c.note("max " + std::to_string(worst) + " req in any 1s window at 4 qps");
  }

  {  // cache hit
    ts::TempDir dir;
    FakeScorer server;
    auto cfg = config_for(server);
    cfg.cache_path = dir / "cache.jsonl";
    { RemoteScorer(cfg).score("cached text"); }
    RemoteScorer client(cfg);
    const auto before = server.request_count();
    const auto s = client.score("cached text");
    c.expect(s.scorer == ScorerKind::kCached, "cache miss on known text");
    c.expect(server.request_count() == before && client.requests_issued() == 0, "cache hit issued a request");
  }
  return c.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "summary table consistency", 1, summary_consistency},
      {2, "threshold boundaries", 1, threshold_boundaries},
      {3, "matcher equals naive scan", 30, matcher_equivalence},
      {4, "sgns gradient check", 10, gradient_check},
      {5, "planted semantics", 60, planted_semantics},
      {6, "expansion equals brute force", 5, expansion_brute_force},
      {7, "end-to-end fixture", 30, end_to_end},
      {8, "spike detection", 1, spike_detection},
      {9, "determinism and persistence", 60, determinism},
      {10, "scorer client protocol", 30, scorer_protocol},
  };
  // Pipeline warnings (e.g. expected fixture noise) are not part of the report.
  set_warning_sink([](std::string_view) {});

  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > cr.budget_seconds) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget of ") + fmt(cr.budget_seconds) + "s";
    }
    failures += !o.pass;
    std::printf("%s [%2d] %-30s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", cr.number, cr.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
