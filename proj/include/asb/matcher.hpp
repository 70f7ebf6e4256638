#ifndef ASB_MATCHER_HPP_
#define ASB_MATCHER_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asb/corpus.hpp"
#include "asb/error.hpp"
#include "asb/labels.hpp"
#include "asb/lexicon.hpp"

namespace asb {

struct MatchResult {
  std::string source_id;
  std::vector<std::string> matched_terms;  // sorted, unique
  Label label = Label::kNormal;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

}  // namespace detail

/// Aho-Corasick automaton whose alphabet is the set of tokens used by the
/// patterns. Patterns are token sequences, so matches always align with
/// token boundaries; a token outside the alphabet sends the automaton back
/// to the root. Input is read as bare_tokens(), i.e. hashtags by their bare
/// twin.
class PatternAutomaton {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  /// Terms are space-joined token sequences; duplicates collapse.
  static PatternAutomaton compile(std::span<const std::string> terms, std::string source_name = {}) {
    PatternAutomaton a;
    a.source_name_ = std::move(source_name);
    a.nodes_.emplace_back();
    for (const auto& term : terms) a.add(term);
    if (a.patterns_.empty()) throw ValidationError("cannot compile an empty lexicon");
    a.link();
    return a;
  }

  static PatternAutomaton compile(const LexiconSet& lex) {
    const auto terms = lex.terms();
    return compile(terms, lex.name());
  }

  std::size_t pattern_count() const { return patterns_.size(); }
  const std::string& source_name() const { return source_name_; }
  const std::string& pattern(std::uint32_t index) const { return patterns_[index]; }
  std::uint32_t pattern_arity(std::uint32_t index) const { return arity_[index]; }

  /// Calls on_match(pattern_index, end_token_index) for every occurrence,
  /// in order of end position.
  template <typename OnMatch>
  void scan(std::span<const std::string> tokens, OnMatch&& on_match) const {
    std::uint32_t state = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (detail::is_hashtag_twin(tokens, i + 1)) continue;  // match on the bare twin
      const auto sym = alphabet_.find(std::string_view(tokens[i]));
      if (sym == alphabet_.end()) {
        state = 0;
        continue;
      }
      state = step(state, sym->second);
      for (std::uint32_t n = nodes_[state].output != kNone ? state : nodes_[state].dict_link;
           n != kNone; n = nodes_[n].dict_link) {
        on_match(nodes_[n].output, i);
      }
    }
  }

  MatchResult annotate(const TokenSequence& seq) const {
    MatchResult result;
    result.source_id = seq.source_id;
    std::vector<std::uint32_t> hits;
    scan(seq.tokens, [&](std::uint32_t p, std::size_t) { hits.push_back(p); });
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    result.matched_terms.reserve(hits.size());
    for (auto p : hits) result.matched_terms.push_back(patterns_[p]);
    std::sort(result.matched_terms.begin(), result.matched_terms.end());
    result.label = result.matched_terms.empty() ? Label::kNormal : Label::kAntisocial;
    return result;
  }

 private:
  struct Node {
    std::uint32_t fail = 0;
    std::uint32_t output = kNone;     // pattern ending exactly here
    std::uint32_t dict_link = kNone;  // nearest proper suffix node with output
  };

  static std::uint64_t edge_key(std::uint32_t node, std::uint32_t sym) {
    return (static_cast<std::uint64_t>(node) << 32) | sym;
  }

  std::uint32_t child(std::uint32_t node, std::uint32_t sym) const {
    auto it = edges_.find(edge_key(node, sym));
    return it == edges_.end() ? kNone : it->second;
  }

  std::uint32_t step(std::uint32_t state, std::uint32_t sym) const {
    while (true) {
      const std::uint32_t next = child(state, sym);
      if (next != kNone) return next;
      if (state == 0) return 0;
      state = nodes_[state].fail;
    }
  }

  void add(const std::string& term) {
    const auto parts = split_term(term);
    if (parts.empty()) throw ValidationError("lexicon term has no tokens: '" + term + "'");
    std::string canonical;
    std::uint32_t node = 0;
    for (const auto& part : parts) {
      if (!canonical.empty()) canonical.push_back(' ');
      canonical += part;
      auto [it, inserted] =
          alphabet_.emplace(part, static_cast<std::uint32_t>(alphabet_.size()));
      const std::uint32_t sym = it->second;
      std::uint32_t next = child(node, sym);
      if (next == kNone) {
        next = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        edges_.emplace(edge_key(node, sym), next);
        children_[node].push_back({sym, next});
      }
      node = next;
    }
    if (nodes_[node].output == kNone) {
      nodes_[node].output = static_cast<std::uint32_t>(patterns_.size());
      patterns_.push_back(std::move(canonical));
      arity_.push_back(static_cast<std::uint32_t>(parts.size()));
    }
  }

  // Breadth-first failure and dictionary links.
  void link() {
    std::deque<std::uint32_t> queue;
    for (const auto& [sym, c] : children_[0]) {
      nodes_[c].fail = 0;
      queue.push_back(c);
    }
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      auto it = children_.find(u);
      if (it == children_.end()) continue;
      for (const auto& [sym, v] : it->second) {
        std::uint32_t f = nodes_[u].fail;
        std::uint32_t target = kNone;
        while (true) {
          target = child(f, sym);
          if (target != kNone || f == 0) break;
          f = nodes_[f].fail;
        }
        nodes_[v].fail = (target == kNone || target == v) ? 0 : target;
        const std::uint32_t fv = nodes_[v].fail;
        nodes_[v].dict_link = nodes_[fv].output != kNone ? fv : nodes_[fv].dict_link;
        queue.push_back(v);
      }
    }
    children_.clear();
  }

  std::string source_name_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::uint32_t> edges_;
  std::unordered_map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> children_;
  std::unordered_map<std::string, std::uint32_t, detail::StringHash, std::equal_to<>> alphabet_;
  std::vector<std::string> patterns_;
  std::vector<std::uint32_t> arity_;
};

inline PatternAutomaton compile(const LexiconSet& lex) { return PatternAutomaton::compile(lex); }

inline MatchResult annotate(const TokenSequence& tokens, const PatternAutomaton& automaton) {
  return automaton.annotate(tokens);
}

}  // namespace asb

#endif  // ASB_MATCHER_HPP_
