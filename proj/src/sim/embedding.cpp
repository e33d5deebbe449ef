#include "ssnav/sim/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace ssnav {

namespace {

const std::set<std::string>& stopWords() {
  static const std::set<std::string> words = {
      "a",  "an", "the", "find", "locate", "go", "to", "get", "me",   "for",    "of",
      "in", "on", "at",  "is",   "look",   "search", "please", "navigate", "near", "some"};
  return words;
}

std::vector<std::string> contentTokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  std::vector<std::string> content;
  for (auto& t : tokens)
    if (!stopWords().count(t)) content.push_back(t);
  if (content.empty() && !tokens.empty()) content = tokens;  // all-stopword phrase
  return content;
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Box-Muller over the fully specified mt19937_64 stream; std::normal_distribution
// is implementation-defined and would break cross-platform determinism.
Eigen::VectorXd tokenVector(const std::string& token) {
  std::mt19937_64 rng(fnv1a64(token));
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  Eigen::VectorXd v(kEmbeddingDim);
  for (int i = 0; i < kEmbeddingDim; i += 2) {
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = r * std::cos(2.0 * M_PI * u2);
    if (i + 1 < kEmbeddingDim) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  return v / v.norm();
}

}  // namespace

Eigen::VectorXd embedLabel(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("embedLabel: empty label");
  auto tokens = contentTokens(label);
  if (tokens.empty()) tokens.push_back(label);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(kEmbeddingDim);
  for (const auto& t : tokens) sum += tokenVector(t);
  double n = sum.norm();
  if (n < 1e-12) return tokenVector(label);  // cancelling tokens, fall back to the raw string
  return sum / n;
}

double cosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double na = a.norm(), nb = b.norm();
  if (na < 1e-15 || nb < 1e-15) throw std::invalid_argument("cosineSimilarity: zero vector");
  return a.dot(b) / (na * nb);
}

}  // namespace ssnav
