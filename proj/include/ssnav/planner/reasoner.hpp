#pragma once

#include "ssnav/core/config.hpp"
#include "ssnav/planner/context.hpp"

#include <deque>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ssnav {

struct ReasonerRequest {
  std::string context;  // serializeContext document
  std::string task;
};

enum class ReplyKind { Goto, Done, Abstain, Invalid };

struct ParsedReply {
  ReplyKind kind = ReplyKind::Invalid;
  int id = -1;
};

// Strict reply schema: exactly one of {"target_region": int}, {"done": int},
// {"abstain": true}. Anything else is Invalid. Never throws.
ParsedReply parseReasonerResponse(const std::string& text);

// Coarse reasoner over the serialized context. begin() starts one request;
// poll() yields the raw reply text once available (nullopt while pending).
// Failures surface as unparseable replies, never as exceptions from poll().
class ReasonerBackend {
 public:
  virtual ~ReasonerBackend() = default;
  virtual void begin(const ReasonerRequest& req) = 0;
  virtual std::optional<std::string> poll() = 0;
  virtual bool busy() const = 0;
  virtual std::string name() const = 0;
};

// Deterministic in-process scorer: per region with >= 1 active frontier,
// score = max cosine(task, object label) + adjacency bonus - visit penalty.
// Abstains when no objects are mapped anywhere or no region is eligible.
class HeuristicBackend : public ReasonerBackend {
 public:
  explicit HeuristicBackend(const PlannerConfig& cfg) : cfg_(cfg) {}

  void begin(const ReasonerRequest& req) override;
  std::optional<std::string> poll() override;
  bool busy() const override { return pending_.has_value(); }
  std::string name() const override { return "heuristic"; }

  // exposed for inspection; empty means abstain
  std::map<int, double> scores(const ReasonerRequest& req) const;
  // argmax with smallest-id tie break
  static std::optional<int> pick(const std::map<int, double>& scores);

 private:
  PlannerConfig cfg_;
  std::optional<std::string> pending_;
};

// Scripted replies for tests; optional per-reply poll latency. An exhausted
// script abstains.
class MockBackend : public ReasonerBackend {
 public:
  void push(const std::string& reply, int latency_polls = 0);
  void begin(const ReasonerRequest& req) override;
  std::optional<std::string> poll() override;
  bool busy() const override { return active_; }
  std::string name() const override { return "mock"; }
  const std::vector<ReasonerRequest>& requests() const { return requests_; }

 private:
  struct Scripted {
    std::string reply;
    int latency = 0;
  };
  std::deque<Scripted> script_;
  std::vector<ReasonerRequest> requests_;
  Scripted current_;
  bool active_ = false;
};

// Client for an external completion endpoint. POSTs
// {"context": <document>, "task": ...}; expects the reply schema back.
// Timeout with one retry, then an empty reply (parses Invalid). The request
// runs on a worker thread so the fine planner keeps executing meanwhile.
class LlmBackend : public ReasonerBackend {
 public:
  LlmBackend(const std::string& endpoint, double timeout_s);
  ~LlmBackend() override;

  void begin(const ReasonerRequest& req) override;
  std::optional<std::string> poll() override;
  bool busy() const override { return active_; }
  std::string name() const override { return "llm"; }

 private:
  std::string host_;
  std::string path_;
  double timeout_s_ = 10.0;
  std::future<std::string> result_;
  bool active_ = false;
};

// kind: heuristic | mock | llm; throws std::invalid_argument on anything else
std::unique_ptr<ReasonerBackend> makeReasoner(const std::string& kind, const PlannerConfig& cfg,
                                              const std::string& endpoint);

}  // namespace ssnav
