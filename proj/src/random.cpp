#include "toda/random.hpp"

#include <algorithm>
#include <vector>

#include "toda/error.hpp"

namespace toda {

JacobiMatrix random_jacobi(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("random_jacobi: size must be >= 1");
  SeededSampler rng(seed);
  std::vector<double> diag(n);
  std::vector<double> offdiag(n - 1);
  for (double& b : diag) b = rng.uniform(-2.0, 2.0);
  for (double& a : offdiag) a = rng.uniform(0.5, 2.0);
  return JacobiMatrix(std::move(diag), std::move(offdiag));
}

DiscreteMeasure random_measure(std::size_t points, std::uint64_t seed, double lo, double hi,
                               double min_gap) {
  if (points == 0) throw InvalidArgument("random_measure: need at least one point");
  if (!(hi > lo) || min_gap * static_cast<double>(points - 1) >= (hi - lo) / 2.0) {
    throw InvalidArgument("random_measure: interval too small for the requested gap");
  }
  SeededSampler rng(seed);
  std::vector<double> nodes(points);
  for (;;) {
    for (double& x : nodes) x = rng.uniform(lo, hi);
    std::sort(nodes.begin(), nodes.end());
    bool separated = true;
    for (std::size_t i = 1; i < points; ++i) {
      separated = separated && nodes[i] - nodes[i - 1] > std::max(min_gap, 0.0);
    }
    if (separated) break;
  }
  std::vector<double> weights(points);
  double total = 0.0;
  for (double& w : weights) {
    w = rng.uniform(0.1, 1.0);
    total += w;
  }
  for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

} // namespace toda
