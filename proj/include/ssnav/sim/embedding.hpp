#pragma once

#include <Eigen/Dense>

#include <string>

namespace ssnav {

constexpr int kEmbeddingDim = 512;

// Deterministic stand-in for a text encoder: each content token maps to a
// seeded pseudo-random unit direction, and a phrase embeds as the normalized
// sum of its token vectors. Stop words ("find", "a", ...) are dropped so that
// a task phrase like "find a clock" lands on the same direction as the bare
// label "clock".
Eigen::VectorXd embedLabel(const std::string& label);

double cosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace ssnav
