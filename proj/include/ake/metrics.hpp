#pragma once

// Embedding quality metrics. Distances are Euclidean; neighbour ranks
// exclude the point itself and break distance ties by ascending index.

#include "ake/numerics.hpp"

#include <vector>

namespace ake {

struct LabeledEmbedding {
  Matrix points;
  std::vector<int> labels;
};

/// Mean over clusters of max_{c' != c} (s_c + s_c') / ||mu_c - mu_c'||,
/// with s_c the mean distance to the centroid. Lower is better.
double davies_bouldin(const LabeledEmbedding& e);

/// [B / (C - 1)] / [W / (n - C)]. Returns +infinity when the
/// within-cluster dispersion W is zero. Higher is better.
double calinski_harabasz(const LabeledEmbedding& e);

/// Number of distinct labels.
int cluster_count(const std::vector<int>& labels);

struct NeighborhoodReport {
  int k = 15;
  double trustworthiness = 0.0;
  double continuity = 0.0;
};

/// Penalises points that are k-nearest neighbours in Z but not in X_orig.
double trustworthiness(const Matrix& X_orig, const Matrix& Z, int k);

/// Penalises points that are k-nearest neighbours in X_orig but not in Z.
double continuity(const Matrix& X_orig, const Matrix& Z, int k);

/// Both scores from one pair of neighbour rankings. Requires 1 <= k < n/2.
NeighborhoodReport neighborhood_report(const Matrix& X_orig, const Matrix& Z, int k);

namespace serial {

NeighborhoodReport neighborhood_report(const Matrix& X_orig, const Matrix& Z, int k);

}  // namespace serial

}  // namespace ake
