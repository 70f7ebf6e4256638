#ifndef ASB_TESTS_FAKE_SCORER_HPP_
#define ASB_TESTS_FAKE_SCORER_HPP_

#include <httplib.h>

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace testing_support {

// Local HTTP server speaking the comment-analyzer protocol. Responses come
// from a script queue first, then from the fallback function.
class FakeScorer {
 public:
  struct Reply {
    int status = 200;
    std::string body;
    std::chrono::milliseconds delay{0};
  };
  struct Request {
    std::string path;
    std::string key;
    std::string content_type;
    std::string body;
    std::chrono::steady_clock::time_point arrival;
  };

  FakeScorer() {
    server_.Post(".*", [this](const httplib::Request& req, httplib::Response& res) {
      Reply reply;
      {
        std::lock_guard<std::mutex> lock(mutex_);
        requests_.push_back({req.path, req.get_param_value("key"), req.get_header_value("Content-Type"), req.body,
                             std::chrono::steady_clock::now()});
        if (!script_.empty()) {
          reply = script_.front();
          script_.pop_front();
        } else {
          reply = fallback_(req.body);
        }
      }
      if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeScorer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  FakeScorer(const FakeScorer&) = delete;
  FakeScorer& operator=(const FakeScorer&) = delete;

  std::string url(const std::string& path = "/v1alpha1/comments:analyze") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  static std::string score_body(double value) {
    return nlohmann::json{{"attributeScores", {{"TOXICITY", {{"summaryScore", {{"value", value}, {"type", "PROBABILITY"}}}}}}},
                          {"languages", {"en"}}}
        .dump();
  }

  void push(Reply r) {
    std::lock_guard<std::mutex> lock(mutex_);
    script_.push_back(std::move(r));
  }

  void set_fallback(std::function<Reply(const std::string&)> fn) {
    std::lock_guard<std::mutex> lock(mutex_);
    fallback_ = std::move(fn);
  }

  std::vector<Request> requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
  }

  std::size_t request_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_.size();
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mutex_;
  std::deque<Reply> script_;
  std::vector<Request> requests_;
  std::function<Reply(const std::string&)> fallback_ = [](const std::string&) {
    return Reply{200, score_body(0.25), {}};
  };
};

}  // namespace testing_support

#endif  // ASB_TESTS_FAKE_SCORER_HPP_
