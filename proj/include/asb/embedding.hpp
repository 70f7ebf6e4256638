#ifndef ASB_EMBEDDING_HPP_
#define ASB_EMBEDDING_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "asb/corpus.hpp"
#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/lexicon.hpp"

namespace asb {

struct TrainConfig {
  std::uint32_t dim = 100;
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  std::uint64_t min_count = 5;
  double learning_rate_initial = 0.025;
  double subsample_threshold = 1e-3;  // 0 disables subsampling
  std::uint64_t seed = 1;
  // More than one worker trains hogwild-style and is not reproducible.
  unsigned workers = 1;

  void validate() const {
    if (dim < 2) throw ValidationError("train: dim must be >= 2");
    if (window < 1) throw ValidationError("train: window must be >= 1");
    if (negatives < 1) throw ValidationError("train: negatives must be >= 1");
    if (epochs < 1) throw ValidationError("train: epochs must be >= 1");
    if (min_count < 1) throw ValidationError("train: min_count must be >= 1");
    if (!(learning_rate_initial > 0.0)) throw ValidationError("train: learning_rate_initial must be > 0");
    if (!(subsample_threshold >= 0.0)) throw ValidationError("train: subsample_threshold must be >= 0");
    if (workers < 1) throw ValidationError("train: workers must be >= 1");
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// ---------------------------------------------------------------------------
// Vocabulary

struct VocabEntry {
  std::string term;
  std::uint64_t frequency = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// Terms ordered by descending frequency, then lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
    index_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!index_.emplace(entries_[i].term, static_cast<std::uint32_t>(i)).second) {
        throw ValidationError("duplicate vocabulary term '" + entries_[i].term + "'");
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }

  std::optional<std::uint32_t> find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view term) const { return find(term).has_value(); }

  std::uint32_t require(std::string_view term) const {
    auto idx = find(term);
    if (!idx) throw OovError(std::string(term));
    return *idx;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline Vocabulary build_vocab(std::span<const TokenSequence> corpus, std::uint64_t min_count) {
  if (corpus.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& seq : corpus) {
    for (const auto& t : seq.tokens) ++counts[t];
  }
  std::vector<VocabEntry> entries;
  for (auto& [term, freq] : counts) {
    if (freq >= min_count) entries.push_back({term, freq});
  }
  std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.term < b.term;
  });
  if (entries.empty()) throw ValidationError("vocabulary is empty after min_count filtering");
  return Vocabulary(std::move(entries));
}

// ---------------------------------------------------------------------------
// Skip-gram negative-sampling objective for one (center, context) pair:
//
//   loss = -log s(u_o . v_c) - sum_k log s(-u_k . v_c)
//
// with v_c the center input vector, u_o the context output vector and u_k the
// sampled negative output vectors. Written once, generic in the scalar type,
// so the training step and the finite-difference check share the same code.

namespace sgns {

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T sigmoid(T x) {
  if (x >= 0) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// log(1 + exp(z)) without overflow.
template <typename T>
T softplus(T z) {
  return std::max(z, T(0)) + std::log1p(std::exp(-std::abs(z)));
}

template <typename T>
T pair_loss(std::span<const T> center, std::span<const T> context,
            std::span<const std::span<const T>> negatives) {
  T loss = softplus(-dot(context, center));
  for (const auto& neg : negatives) loss += softplus(dot(neg, center));
  return loss;
}

/// Writes d loss / d center into grad_center (overwritten) and returns the
/// scalar coefficients c such that d loss / d context = c[0] * center and
/// d loss / d negative_k = c[k + 1] * center.
template <typename T>
void pair_gradient(std::span<const T> center, std::span<const T> context,
                   std::span<const std::span<const T>> negatives, std::span<T> grad_center,
                   std::span<T> coefficients) {
  const T g_pos = sigmoid(dot(context, center)) - T(1);
  coefficients[0] = g_pos;
  for (std::size_t i = 0; i < center.size(); ++i) grad_center[i] = g_pos * context[i];
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const T g_neg = sigmoid(dot(negatives[k], center));
    coefficients[k + 1] = g_neg;
    for (std::size_t i = 0; i < center.size(); ++i) grad_center[i] += g_neg * negatives[k][i];
  }
}

}  // namespace sgns

// ---------------------------------------------------------------------------
// Model

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Vocabulary vocab, std::uint32_t dim, std::vector<float> input,
                 std::vector<float> output, TrainConfig config = {})
      : vocab_(std::move(vocab)),
        dim_(dim),
        input_(std::move(input)),
        output_(std::move(output)),
        config_(config) {
    if (dim_ < 1) throw ValidationError("embedding dimension must be >= 1");
    if (input_.size() != vocab_.size() * dim_ || output_.size() != vocab_.size() * dim_) {
      throw ValidationError("embedding matrix shape does not match vocabulary");
    }
    config_.dim = dim_;
    refresh_norms();
  }

  const Vocabulary& vocab() const { return vocab_; }
  std::uint32_t dim() const { return dim_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<float>& input_matrix() const { return input_; }
  const std::vector<float>& output_matrix() const { return output_; }

  std::span<const float> input_row(std::size_t i) const { return {input_.data() + i * dim_, dim_}; }
  std::span<const float> output_row(std::size_t i) const { return {output_.data() + i * dim_, dim_}; }
  std::span<float> mutable_input_row(std::size_t i) { return {input_.data() + i * dim_, dim_}; }
  std::span<float> mutable_output_row(std::size_t i) { return {output_.data() + i * dim_, dim_}; }

  bool all_finite() const {
    auto finite = [](float v) { return std::isfinite(v); };
    return std::all_of(input_.begin(), input_.end(), finite) &&
           std::all_of(output_.begin(), output_.end(), finite);
  }

  /// Cosine of two input vectors by row index, clamped to [-1, 1]. A zero
  /// vector has similarity 0 with everything.
  double similarity_at(std::size_t a, std::size_t b) const {
    const double denom = norms_[a] * norms_[b];
    if (denom == 0.0) return 0.0;
    double dot = 0.0;
    const float* pa = input_.data() + a * dim_;
    const float* pb = input_.data() + b * dim_;
    for (std::size_t i = 0; i < dim_; ++i) dot += static_cast<double>(pa[i]) * static_cast<double>(pb[i]);
    return std::clamp(dot / denom, -1.0, 1.0);
  }

  void refresh_norms() {
    norms_.assign(vocab_.size(), 0.0);
    for (std::size_t r = 0; r < vocab_.size(); ++r) {
      double s = 0.0;
      for (float v : input_row(r)) s += static_cast<double>(v) * static_cast<double>(v);
      norms_[r] = std::sqrt(s);
    }
  }

 private:
  Vocabulary vocab_;
  std::uint32_t dim_ = 0;
  std::vector<float> input_;
  std::vector<float> output_;
  std::vector<double> norms_;
  TrainConfig config_;
};

inline double similarity(const EmbeddingModel& model, std::string_view w1, std::string_view w2) {
  return model.similarity_at(model.vocab().require(w1), model.vocab().require(w2));
}

struct Neighbor {
  std::string term;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Top-k terms by descending similarity to `term`, excluding it; ties broken
/// lexicographically.
inline std::vector<Neighbor> neighbors(const EmbeddingModel& model, std::string_view term, std::size_t k) {
  if (k < 1) throw ValidationError("neighbors: k must be >= 1");
  const std::uint32_t self = model.vocab().require(term);
  std::vector<Neighbor> all;
  all.reserve(model.vocab().size());
  for (std::size_t i = 0; i < model.vocab().size(); ++i) {
    if (i == self) continue;
    all.push_back({model.vocab()[i].term, model.similarity_at(self, i)});
  }
  auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.term < b.term;
  };
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), better);
  all.resize(take);
  return all;
}

/// Vocabulary terms whose best cosine against any single-token basic term
/// strictly exceeds `threshold`. Candidates are compared in normalized form
/// (a hashtag candidate "#x" becomes "x"), and those already in `basic` are
/// skipped. Multi-token basic entries do not anchor similarity.
inline LexiconSet expand_lexicon(const EmbeddingModel& model, const LexiconSet& basic,
                                 double threshold = 0.7) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("expand_lexicon: threshold must lie in (0, 1]");
  }
  std::vector<std::uint32_t> anchors;
  for (const auto& [term, entry] : basic) {
    if (entry.arity != 1) continue;
    if (auto idx = model.vocab().find(term)) anchors.push_back(*idx);
  }
  if (anchors.empty()) throw ValidationError("lexicon disjoint from vocabulary");
  LexiconSet extended("extended", LexiconKind::kExtended);
  for (std::size_t i = 0; i < model.vocab().size(); ++i) {
    const std::string candidate = normalize_term(model.vocab()[i].term);
    if (candidate.empty() || basic.contains(candidate) || extended.contains(candidate)) continue;
    double best = -1.0;
    for (auto a : anchors) best = std::max(best, model.similarity_at(i, a));
    if (best > threshold) extended.insert({candidate, 1, LexiconSource::kExpanded, 0});
  }
  return extended;
}

// ---------------------------------------------------------------------------
// Training

struct EpochStats {
  std::uint32_t epoch = 0;  // 1-based
  double mean_pair_loss = 0.0;
  std::uint64_t pairs = 0;
};

using EpochCallback = std::function<void(const EpochStats&, const EmbeddingModel&)>;

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double total = 0.0;
    for (const auto& e : vocab.entries()) {
      total += std::pow(static_cast<double>(e.frequency), 0.75);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::uint32_t sample(std::mt19937_64& rng) const {
    const double u = unit_uniform(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

inline std::vector<std::vector<std::uint32_t>> encode(std::span<const TokenSequence> corpus,
                                                      const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(corpus.size());
  for (const auto& seq : corpus) {
    std::vector<std::uint32_t> ids;
    ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) {
      if (auto idx = vocab.find(t)) ids.push_back(*idx);
    }
    if (!ids.empty()) out.push_back(std::move(ids));
  }
  return out;
}

struct StepScratch {
  std::vector<float> grad_center;
  std::vector<float> coefficients;
  std::vector<std::uint32_t> negative_ids;
  std::vector<std::span<const float>> negative_rows;
};

// One SGD step on the pair loss. Returns the pair loss before the update.
inline double train_pair(EmbeddingModel& model, std::uint32_t center, std::uint32_t context,
                         const NegativeSampler& sampler, std::uint32_t negatives, float lr,
                         std::mt19937_64& rng, StepScratch& s) {
  const std::uint32_t dim = model.dim();
  s.grad_center.resize(dim);
  s.negative_ids.clear();
  for (std::uint32_t k = 0; k < negatives; ++k) {
    const std::uint32_t n = sampler.sample(rng);
    if (n != context) s.negative_ids.push_back(n);
  }
  s.coefficients.resize(s.negative_ids.size() + 1);
  s.negative_rows.clear();
  for (auto n : s.negative_ids) s.negative_rows.push_back(model.output_row(n));
  const auto v = model.input_row(center);
  const auto u = model.output_row(context);
  const float loss = sgns::pair_loss<float>(v, u, s.negative_rows);
  sgns::pair_gradient<float>(v, u, s.negative_rows, s.grad_center, s.coefficients);
  auto u_mut = model.mutable_output_row(context);
  for (std::uint32_t i = 0; i < dim; ++i) u_mut[i] -= lr * s.coefficients[0] * v[i];
  for (std::size_t k = 0; k < s.negative_ids.size(); ++k) {
    auto n_mut = model.mutable_output_row(s.negative_ids[k]);
    for (std::uint32_t i = 0; i < dim; ++i) n_mut[i] -= lr * s.coefficients[k + 1] * v[i];
  }
  auto v_mut = model.mutable_input_row(center);
  for (std::uint32_t i = 0; i < dim; ++i) v_mut[i] -= lr * s.grad_center[i];
  return loss;
}

}  // namespace detail

/// Mean pair loss over `corpus` under the model, with negatives drawn from a
/// generator seeded by `seed` so that successive evaluations are comparable.
inline double evaluate_loss(const EmbeddingModel& model, std::span<const TokenSequence> corpus,
                            std::uint32_t window, std::uint32_t negatives, std::uint64_t seed) {
  const auto sentences = detail::encode(corpus, model.vocab());
  const detail::NegativeSampler sampler(model.vocab());
  std::mt19937_64 rng(seed);
  double total = 0.0;
  std::uint64_t pairs = 0;
  std::vector<std::span<const float>> negs;
  for (const auto& sent : sentences) {
    for (std::size_t pos = 0; pos < sent.size(); ++pos) {
      const std::size_t lo = pos >= window ? pos - window : 0;
      const std::size_t hi = std::min(sent.size(), pos + window + 1);
      for (std::size_t c = lo; c < hi; ++c) {
        if (c == pos) continue;
        negs.clear();
        for (std::uint32_t k = 0; k < negatives; ++k) {
          const auto n = sampler.sample(rng);
          if (n != sent[c]) negs.push_back(model.output_row(n));
        }
        total += sgns::pair_loss<float>(model.input_row(sent[pos]), model.output_row(sent[c]), negs);
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

/// Trains skip-gram vectors with negative sampling. With one worker the
/// result depends only on the corpus and the config (including seed).
inline EmbeddingModel train(std::span<const TokenSequence> corpus, const TrainConfig& config,
                            const EpochCallback& on_epoch = {}) {
  config.validate();
  Vocabulary vocab = build_vocab(corpus, config.min_count);
  auto sentences = detail::encode(corpus, vocab);
  std::uint64_t corpus_tokens = 0;
  for (const auto& s : sentences) corpus_tokens += s.size();
  if (corpus_tokens <= config.window) {
    throw ValidationError("corpus is shorter than the context window");
  }

  const std::size_t v = vocab.size();
  const std::uint32_t dim = config.dim;
  std::mt19937_64 init_rng(config.seed);
  std::vector<float> input(v * dim);
  for (auto& x : input) {
    x = static_cast<float>((detail::unit_uniform(init_rng) - 0.5) / dim);
  }
  std::vector<float> output(v * dim, 0.0f);
  EmbeddingModel model(std::move(vocab), dim, std::move(input), std::move(output), config);

  const detail::NegativeSampler sampler(model.vocab());
  std::vector<double> keep_prob(v, 1.0);
  if (config.subsample_threshold > 0.0) {
    const double t = config.subsample_threshold * static_cast<double>(corpus_tokens);
    for (std::size_t i = 0; i < v; ++i) {
      const double f = static_cast<double>(model.vocab()[i].frequency);
      keep_prob[i] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
    }
  }

  const double total_work = static_cast<double>(corpus_tokens) * config.epochs + 1.0;
  const unsigned workers = std::max(1u, config.workers);

  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<double> loss_sum(workers, 0.0);
    std::vector<std::uint64_t> pair_count(workers, 0);
    auto run_shard = [&](unsigned w, std::size_t begin, std::size_t end) {
      std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + (epoch + 1) * 1000003ULL + w);
      detail::StepScratch scratch;
      std::vector<std::uint32_t> kept;
      // Offset the progress counter by the tokens that precede this shard.
      std::uint64_t processed = epoch * corpus_tokens;
      for (std::size_t s = 0; s < begin; ++s) processed += sentences[s].size();
      for (std::size_t s = begin; s < end; ++s) {
        const auto& sent = sentences[s];
        processed += sent.size();
        const float lr = static_cast<float>(config.learning_rate_initial *
                                            std::max(1e-4, 1.0 - static_cast<double>(processed) / total_work));
        kept.clear();
        for (auto id : sent) {
          if (keep_prob[id] >= 1.0 || detail::unit_uniform(rng) < keep_prob[id]) kept.push_back(id);
        }
        for (std::size_t pos = 0; pos < kept.size(); ++pos) {
          const std::uint32_t reduced = static_cast<std::uint32_t>(rng() % config.window);
          const std::size_t span = config.window - reduced;
          const std::size_t lo = pos >= span ? pos - span : 0;
          const std::size_t hi = std::min(kept.size(), pos + span + 1);
          for (std::size_t c = lo; c < hi; ++c) {
            if (c == pos) continue;
            const double loss = detail::train_pair(model, kept[pos], kept[c], sampler,
                                                   config.negatives, lr, rng, scratch);
            loss_sum[w] += loss;
            ++pair_count[w];
          }
        }
      }
    };
    if (workers == 1) {
      run_shard(0, 0, sentences.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (sentences.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(sentences.size(), w * chunk);
        const std::size_t end = std::min(sentences.size(), begin + chunk);
        pool.emplace_back(run_shard, w, begin, end);
      }
      for (auto& t : pool) t.join();
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    double loss = 0.0;
    for (unsigned w = 0; w < workers; ++w) {
      loss += loss_sum[w];
      stats.pairs += pair_count[w];
    }
    stats.mean_pair_loss = stats.pairs == 0 ? 0.0 : loss / static_cast<double>(stats.pairs);
    if (!std::isfinite(stats.mean_pair_loss) || !model.all_finite()) {
      throw TrainingError("training diverged at epoch " + std::to_string(stats.epoch) +
                          " (non-finite loss); lower learning_rate_initial");
    }
    model.refresh_norms();
    if (on_epoch) on_epoch(stats, model);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Binary model file (little-endian):
//   "ASEMB1" | u32 vocab_size | u32 dim |
//   vocab_size x (u16 byte_len | utf-8 term | u64 frequency) |
//   f32[vocab_size*dim] input | f32[vocab_size*dim] output

namespace detail {

inline constexpr std::string_view kModelMagic = "ASEMB1";

template <typename U>
void put_le(std::string& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
  }
}

template <typename U>
U get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(U) > in.size()) throw ValidationError("model file is truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(U);
  return value;
}

}  // namespace detail

inline std::string serialize_model(const EmbeddingModel& model) {
  std::string out(detail::kModelMagic);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.vocab().size()));
  detail::put_le<std::uint32_t>(out, model.dim());
  for (const auto& e : model.vocab().entries()) {
    if (e.term.size() > UINT16_MAX) throw ValidationError("vocabulary term longer than 65535 bytes");
    detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(e.term.size()));
    out += e.term;
    detail::put_le<std::uint64_t>(out, e.frequency);
  }
  for (const auto* m : {&model.input_matrix(), &model.output_matrix()}) {
    for (float f : *m) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

inline EmbeddingModel deserialize_model(std::string_view in) {
  if (in.substr(0, detail::kModelMagic.size()) != detail::kModelMagic) {
    throw ValidationError("not an embedding model file (bad magic)");
  }
  std::size_t pos = detail::kModelMagic.size();
  const auto v = detail::get_le<std::uint32_t>(in, pos);
  const auto dim = detail::get_le<std::uint32_t>(in, pos);
  std::vector<VocabEntry> entries;
  entries.reserve(v);
  for (std::uint32_t i = 0; i < v; ++i) {
    const auto len = detail::get_le<std::uint16_t>(in, pos);
    if (pos + len > in.size()) throw ValidationError("model file is truncated");
    std::string term(in.substr(pos, len));
    pos += len;
    entries.push_back({std::move(term), detail::get_le<std::uint64_t>(in, pos)});
  }
  auto read_matrix = [&] {
    std::vector<float> m(static_cast<std::size_t>(v) * dim);
    for (auto& f : m) f = std::bit_cast<float>(detail::get_le<std::uint32_t>(in, pos));
    return m;
  };
  auto input = read_matrix();
  auto output = read_matrix();
  if (pos != in.size()) throw ValidationError("model file has trailing bytes");
  TrainConfig config;
  config.dim = dim;
  return EmbeddingModel(Vocabulary(std::move(entries)), dim, std::move(input), std::move(output), config);
}

inline void save_model(const std::filesystem::path& path, const EmbeddingModel& model) {
  io::write_atomic(path, serialize_model(model));
}

inline EmbeddingModel load_model(const std::filesystem::path& path) {
  return deserialize_model(io::read_file(path));
}

}  // namespace asb

#endif  // ASB_EMBEDDING_HPP_
