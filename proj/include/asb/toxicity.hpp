#ifndef ASB_TOXICITY_HPP_
#define ASB_TOXICITY_HPP_

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "asb/corpus.hpp"
#include "asb/error.hpp"
#include "asb/io.hpp"
#include "asb/labels.hpp"

namespace asb {

enum class ScorerKind { kRemote, kStub, kCached };

inline std::string_view to_string(ScorerKind k) {
  switch (k) {
    case ScorerKind::kRemote: return "REMOTE";
    case ScorerKind::kStub: return "STUB";
    case ScorerKind::kCached: return "CACHED";
  }
  return "REMOTE";
}

inline ScorerKind parse_scorer_kind(std::string_view s) {
  if (s == "REMOTE") return ScorerKind::kRemote;
  if (s == "STUB") return ScorerKind::kStub;
  if (s == "CACHED") return ScorerKind::kCached;
  throw ValidationError("unknown scorer kind '" + std::string(s) + "'");
}

struct ToxicityScore {
  std::string source_id;
  double score = 0.0;  // in [0, 1]
  ScorerKind scorer = ScorerKind::kStub;

  friend bool operator==(const ToxicityScore&, const ToxicityScore&) = default;
};

struct ScorerConfig {
  std::string endpoint_url = "https://commentanalyzer.googleapis.com/v1alpha1/comments:analyze";
  std::string api_key;  // from the environment only, never persisted
  double max_qps = 1.0;
  std::uint32_t max_retries = 5;
  double timeout = 10.0;  // seconds
  double threshold = 0.5;
  std::optional<std::filesystem::path> cache_path;
  // Backoff after HTTP 429: base * factor^attempt * (1 + U[0, jitter)).
  double backoff_base = 1.0;
  double backoff_factor = 2.0;
  double backoff_jitter = 0.25;
  std::uint64_t jitter_seed = 7;

  void validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("scorer: threshold must lie in [0, 1]");
    if (!(max_qps >= 1.0)) throw ValidationError("scorer: max_qps must be >= 1");
    if (!(timeout > 0.0)) throw ValidationError("scorer: timeout must be > 0");
    if (!(backoff_base >= 0.0) || !(backoff_factor >= 1.0) || !(backoff_jitter >= 0.0)) {
      throw ValidationError("scorer: invalid backoff settings");
    }
  }
};

/// ANTISOCIAL iff score > threshold (strict).
inline Label classify(double score, double threshold = 0.5) {
  return score > threshold ? Label::kAntisocial : Label::kNormal;
}

inline Label classify(const ToxicityScore& score, double threshold = 0.5) {
  return classify(score.score, threshold);
}

// ---------------------------------------------------------------------------
// Offline stub

inline constexpr std::array<std::string_view, 40> kProfanitySeeds = {
    "bastard", "bitch",   "bloody",     "crap",   "damn",    "die",    "disgusting", "dumb",
    "fool",    "fuck",    "fucking",    "garbage", "hate",   "hell",   "idiot",      "idiots",
    "imbecile", "jerk",   "kill",       "liar",   "liars",   "loser",  "losers",     "moron",
    "morons",  "nasty",   "pathetic",   "piss",   "scum",    "shit",   "shut",       "stupid",
    "suck",    "sucks",   "trash",      "ugly",   "vile",    "worthless", "wtf",     "scumbag"};

/// Number of tokens of `text` found in the bundled seed list (with repeats).
inline std::size_t profanity_hits(std::string_view text) {
  static const std::unordered_set<std::string_view> kSeeds(kProfanitySeeds.begin(), kProfanitySeeds.end());
  std::size_t hits = 0;
  for (const auto& tok : tokenize(text)) hits += kSeeds.count(tok);
  return hits;
}

/// Deterministic offline score: 0.1 baseline plus 0.2 per seed-list token,
/// clamped to 1. Computed as (1 + 2h) / 10 so two hits land exactly on 0.5.
inline ToxicityScore score_stub(std::string_view text, std::string source_id = {}) {
  const double h = static_cast<double>(profanity_hits(text));
  return {std::move(source_id), std::min(1.0, (1.0 + 2.0 * h) / 10.0), ScorerKind::kStub};
}

// ---------------------------------------------------------------------------
// Wire protocol

inline std::string build_request_body(std::string_view text) {
  nlohmann::json body;
  body["comment"]["text"] = text;
  body["languages"] = nlohmann::json::array({"en"});
  body["requestedAttributes"]["TOXICITY"] = nlohmann::json::object();
  return body.dump();
}

/// Extracts attributeScores.TOXICITY.summaryScore.value.
inline double parse_response(std::string_view body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ProtocolError("scorer response is not JSON");
  const nlohmann::json* node = &j;
  for (const char* key : {"attributeScores", "TOXICITY", "summaryScore", "value"}) {
    if (!node->is_object() || !node->contains(key)) {
      throw ProtocolError(std::string("scorer response lacks '") + key + "'");
    }
    node = &(*node)[key];
  }
  if (!node->is_number()) throw ProtocolError("scorer summary score is not a number");
  const double v = node->get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw ProtocolError("scorer summary score outside [0, 1]");
  return v;
}

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cache: line-delimited {"sha256": ..., "score": ...}, keyed by text hash.

class ScoreCache {
 public:
  ScoreCache() = default;
  explicit ScoreCache(std::optional<std::filesystem::path> path) : path_(std::move(path)) {
    if (path_ && std::filesystem::exists(*path_)) {
      io::LineReader reader(*path_);
      std::string line;
      while (reader.next(line)) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("sha256") || !j.contains("score") ||
            !j["sha256"].is_string() || !j["score"].is_number()) {
          continue;
        }
        entries_[j["sha256"].get<std::string>()] = j["score"].get<double>();
      }
    }
  }

  std::optional<double> lookup(std::string_view text) const {
    const auto key = sha256_hex(text);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(std::string_view text, double score) {
    const auto key = sha256_hex(text);
    std::lock_guard<std::mutex> lock(mutex_);
    if (!entries_.emplace(key, score).second) return;
    if (path_) {
      if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
      std::ofstream out(*path_, std::ios::app | std::ios::binary);
      if (!out) throw IoError("cannot append to cache '" + path_->string() + "'");
      out << nlohmann::json{{"sha256", key}, {"score", score}}.dump() << '\n';
    }
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
  }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, double> entries_;
};

// ---------------------------------------------------------------------------
// Rate limiting

/// Admits at most `max_per_window` requests in any sliding window of length
/// `window`. acquire() blocks until a slot is free. `guard` widens the window
/// slightly so receiver-side arrival jitter cannot push two admissions into
/// the same nominal window.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(double max_per_second, std::chrono::nanoseconds guard = std::chrono::milliseconds(20))
      : capacity_(static_cast<std::size_t>(std::floor(max_per_second))),
        window_(std::chrono::seconds(1) + guard) {
    if (capacity_ < 1) throw ValidationError("rate limit must allow at least one request per second");
  }

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    while (true) {
      const auto now = Clock::now();
      while (!issued_.empty() && now - issued_.front() >= window_) issued_.pop_front();
      if (issued_.size() < capacity_) {
        issued_.push_back(now);
        return;
      }
      const auto wake = issued_.front() + window_;
      lock.unlock();
      std::this_thread::sleep_until(wake);
      lock.lock();
    }
  }

 private:
  std::size_t capacity_;
  Clock::duration window_;
  std::mutex mutex_;
  std::deque<Clock::time_point> issued_;
};

// ---------------------------------------------------------------------------
// Remote client

namespace detail {

inline std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

inline Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("scorer endpoint must be an http(s) URL");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ValidationError("scorer endpoint must be an http(s) URL");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw ValidationError("built without TLS support; https endpoints unavailable");
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

/// HTTP client for a Perspective-compatible comment scorer.
///
/// Shareable across threads: the cache and rate limiter are synchronized and
/// each call uses its own connection. HTTP 429 is retried with exponential
/// backoff up to max_retries; other failures surface as typed errors.
class RemoteScorer {
 public:
  using Sleeper = std::function<void(std::chrono::duration<double>)>;

  explicit RemoteScorer(ScorerConfig config, Sleeper sleeper = {})
      : config_(std::move(config)),
        endpoint_(detail::split_endpoint(config_.endpoint_url)),
        limiter_(config_.max_qps),
        cache_(config_.cache_path),
        sleeper_(std::move(sleeper)),
        jitter_rng_(config_.jitter_seed) {
    config_.validate();
    if (config_.api_key.empty()) throw ValidationError("scorer API key is not set");
    if (!sleeper_) {
      sleeper_ = [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
    }
  }

  ToxicityScore score(std::string_view text, std::string source_id = {}) {
    if (auto cached = cache_.lookup(text)) return {std::move(source_id), *cached, ScorerKind::kCached};
    const std::string body = build_request_body(text);
    const std::string target = endpoint_.path + "?key=" + detail::url_encode(config_.api_key);
    for (std::uint32_t attempt = 0;; ++attempt) {
      limiter_.acquire();
      httplib::Client client(endpoint_.scheme_host_port);
      const auto secs = std::chrono::duration<double>(config_.timeout);
      const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(secs);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      ++requests_;
      auto res = client.Post(target, body, "application/json");
      if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Read || err == httplib::Error::Write ||
            err == httplib::Error::ConnectionTimeout) {
          throw Timeout("scorer request timed out (" + httplib::to_string(err) + ")");
        }
        throw ScorerError("scorer request failed: " + httplib::to_string(err));
      }
      if (res->status == 429) {
        if (attempt >= config_.max_retries) {
          throw RateLimited("scorer kept answering 429 after " + std::to_string(attempt + 1) + " attempts");
        }
        sleeper_(backoff_delay(attempt));
        continue;
      }
      if (res->status != 200) {
        throw ProtocolError("scorer answered HTTP " + std::to_string(res->status));
      }
      const double value = parse_response(res->body);
      cache_.store(text, value);
      return {std::move(source_id), value, ScorerKind::kRemote};
    }
  }

  /// Delay before retry number attempt+1.
  std::chrono::duration<double> backoff_delay(std::uint32_t attempt) {
    double u = 0.0;
    {
      std::lock_guard<std::mutex> lock(jitter_mutex_);
      u = static_cast<double>(jitter_rng_() >> 11) * 0x1.0p-53;
    }
    const double nominal = config_.backoff_base * std::pow(config_.backoff_factor, attempt);
    return std::chrono::duration<double>(nominal * (1.0 + config_.backoff_jitter * u));
  }

  std::uint64_t requests_issued() const { return requests_.load(); }
  const ScorerConfig& config() const { return config_; }
  const ScoreCache& cache() const { return cache_; }

 private:
  ScorerConfig config_;
  detail::Endpoint endpoint_;
  RateLimiter limiter_;
  ScoreCache cache_;
  Sleeper sleeper_;
  std::mutex jitter_mutex_;
  std::mt19937_64 jitter_rng_;
  std::atomic<std::uint64_t> requests_{0};
};

inline ToxicityScore score_remote(RemoteScorer& client, std::string_view text, std::string source_id = {}) {
  return client.score(text, std::move(source_id));
}

}  // namespace asb

#endif  // ASB_TOXICITY_HPP_
