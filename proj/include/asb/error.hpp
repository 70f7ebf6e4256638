#ifndef ASB_ERROR_HPP_
#define ASB_ERROR_HPP_

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>

namespace asb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or precondition violated by the caller (CLI exit 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Term is not in the embedding vocabulary.
class OovError : public Error {
 public:
  explicit OovError(const std::string& term)
      : Error("out-of-vocabulary term: '" + term + "'"), term_(term) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

/// Term does not occur in the annotated corpus.
class TermNotFound : public Error {
 public:
  explicit TermNotFound(const std::string& term)
      : Error("term not found in corpus: '" + term + "'"), term_(term) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

/// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Scorer client failures. Each leaves the record UNSCORED.
class ScorerError : public Error {
 public:
  using Error::Error;
};

class RateLimited : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

class Timeout : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

class ProtocolError : public ScorerError {
 public:
  using ScorerError::ScorerError;
};

// Warnings are non-fatal notes (empty lexicon after stoplist, short series, ...).
// They go to stderr unless a sink is installed.
using WarningSink = std::function<void(const std::string&)>;

namespace detail {
inline std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}
inline WarningSink& warning_sink() {
  static WarningSink sink;
  return sink;
}
}  // namespace detail

/// Installs a sink for warnings and returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard<std::mutex> lock(detail::warning_mutex());
  auto previous = std::move(detail::warning_sink());
  detail::warning_sink() = std::move(sink);
  return previous;
}

inline void warn(const std::string& message) {
  std::lock_guard<std::mutex> lock(detail::warning_mutex());
  if (detail::warning_sink()) {
    detail::warning_sink()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace asb

#endif  // ASB_ERROR_HPP_
