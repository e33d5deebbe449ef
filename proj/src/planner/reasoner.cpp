#include "ssnav/planner/reasoner.hpp"

#include "ssnav/sim/embedding.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace ssnav {

namespace {

bool asInt(const nlohmann::json& v, int& out) {
  if (!v.is_number_integer()) return false;
  long long raw = v.get<long long>();
  if (raw < std::numeric_limits<int>::min() || raw > std::numeric_limits<int>::max()) return false;
  out = static_cast<int>(raw);
  return true;
}

}  // namespace

ParsedReply parseReasonerResponse(const std::string& text) {
  ParsedReply out;
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.size() != 1) return out;
  if (auto it = doc.find("target_region"); it != doc.end()) {
    if (asInt(*it, out.id)) out.kind = ReplyKind::Goto;
    return out;
  }
  if (auto it = doc.find("done"); it != doc.end()) {
    if (asInt(*it, out.id)) out.kind = ReplyKind::Done;
    return out;
  }
  if (auto it = doc.find("abstain"); it != doc.end()) {
    if (it->is_boolean() && it->get<bool>()) out.kind = ReplyKind::Abstain;
    return out;
  }
  return out;
}

std::map<int, double> HeuristicBackend::scores(const ReasonerRequest& req) const {
  std::map<int, double> out;
  nlohmann::json doc = nlohmann::json::parse(req.context, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("regions")) return out;

  Eigen::VectorXd task = embedLabel(req.task);
  if (task.norm() < 0.5) return out;  // no content tokens in the task

  int current = 0;
  if (doc.contains("current_area") && doc["current_area"].is_object())
    current = doc["current_area"].value("id", 0);

  std::map<int, int> visits;
  if (doc.contains("visit_history"))
    for (const auto& v : doc["visit_history"])
      if (v.is_number_integer()) ++visits[v.get<int>()];

  std::set<int> prior_adjacent;
  if (doc.contains("adjacency_prior"))
    for (const auto& pair : doc["adjacency_prior"])
      if (pair.is_array() && pair.size() == 2 && pair[0].is_number_integer() &&
          pair[1].is_number_integer()) {
        if (pair[0].get<int>() == current) prior_adjacent.insert(pair[1].get<int>());
        if (pair[1].get<int>() == current) prior_adjacent.insert(pair[0].get<int>());
      }

  size_t mapped_objects = 0;
  for (const auto& r : doc["regions"])
    if (r.is_object() && r.contains("objects")) mapped_objects += r["objects"].size();
  if (mapped_objects == 0) return out;  // no semantic cues anywhere

  for (const auto& r : doc["regions"]) {
    if (!r.is_object()) continue;
    int id = r.value("id", 0);
    if (r.value("frontier_count", 0) < 1) continue;  // nothing actionable there

    double affinity = 0.0;
    if (r.contains("objects"))
      for (const auto& o : r["objects"]) {
        std::string label = o.value("label", std::string());
        if (label.empty()) continue;
        Eigen::VectorXd e = embedLabel(label);
        if (e.norm() < 0.5) continue;
        affinity = std::max(affinity, cosineSimilarity(task, e));
      }

    bool adjacent = prior_adjacent.count(id) > 0;
    if (!adjacent && r.contains("adjacent"))
      for (const auto& a : r["adjacent"])
        if (a.is_number_integer() && a.get<int>() == current) adjacent = true;

    double score = affinity + (adjacent ? cfg_.adjacency_bonus : 0.0) -
                   cfg_.visit_penalty * visits[id];
    out[id] = score;
  }
  return out;
}

std::optional<int> HeuristicBackend::pick(const std::map<int, double>& scores) {
  std::optional<int> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& [id, s] : scores)
    if (s > best_score + 1e-12) {
      best_score = s;
      best = id;
    }
  return best;
}

void HeuristicBackend::begin(const ReasonerRequest& req) {
  auto picked = pick(scores(req));
  pending_ = picked ? "{\"target_region\":" + std::to_string(*picked) + "}"
                    : std::string("{\"abstain\":true}");
}

std::optional<std::string> HeuristicBackend::poll() {
  auto out = pending_;
  pending_.reset();
  return out;
}

void MockBackend::push(const std::string& reply, int latency_polls) {
  script_.push_back({reply, latency_polls});
}

void MockBackend::begin(const ReasonerRequest& req) {
  requests_.push_back(req);
  if (script_.empty()) {
    current_ = {"{\"abstain\":true}", 0};
  } else {
    current_ = script_.front();
    script_.pop_front();
  }
  active_ = true;
}

std::optional<std::string> MockBackend::poll() {
  if (!active_) return std::nullopt;
  if (current_.latency > 0) {
    --current_.latency;
    return std::nullopt;
  }
  active_ = false;
  return current_.reply;
}

namespace {

std::pair<std::string, std::string> splitEndpoint(const std::string& url) {
  size_t scheme = url.find("://");
  size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

LlmBackend::LlmBackend(const std::string& endpoint, double timeout_s) : timeout_s_(timeout_s) {
  auto [host, path] = splitEndpoint(endpoint);
  host_ = host;
  path_ = path;
}

LlmBackend::~LlmBackend() {
  if (result_.valid()) result_.wait();
}

void LlmBackend::begin(const ReasonerRequest& req) {
  std::string body =
      "{\"context\":" + req.context + ",\"task\":" + nlohmann::json(req.task).dump() + "}";
  std::string host = host_;
  std::string path = path_;
  double budget = timeout_s_;
  result_ = std::async(std::launch::async, [host, path, body, budget]() -> std::string {
    auto sec = static_cast<time_t>(budget);
    auto usec = static_cast<long>((budget - static_cast<double>(sec)) * 1e6);
    for (int attempt = 0; attempt < 2; ++attempt) {  // one retry
      httplib::Client cli(host);
      cli.set_connection_timeout(sec, usec);
      cli.set_read_timeout(sec, usec);
      cli.set_write_timeout(sec, usec);
      auto res = cli.Post(path, body, "application/json");
      if (res && res->status == 200) return res->body;
    }
    return std::string();  // parses Invalid downstream
  });
  active_ = true;
}

std::optional<std::string> LlmBackend::poll() {
  if (!active_ || !result_.valid()) return std::nullopt;
  if (result_.wait_for(std::chrono::seconds(0)) != std::future_status::ready) return std::nullopt;
  active_ = false;
  return result_.get();
}

std::unique_ptr<ReasonerBackend> makeReasoner(const std::string& kind, const PlannerConfig& cfg,
                                              const std::string& endpoint) {
  if (kind == "heuristic") return std::make_unique<HeuristicBackend>(cfg);
  if (kind == "mock") return std::make_unique<MockBackend>();
  if (kind == "llm") return std::make_unique<LlmBackend>(endpoint, cfg.llm_timeout_s);
  throw std::invalid_argument("reasoner: unknown backend '" + kind + "'");
}

}  // namespace ssnav
