#include "mlsm/relax.hpp"

#include "mlsm/kdtree.hpp"
#include "mlsm/parallel.hpp"

#include <cmath>
#include <limits>

namespace mlsm {

void RelaxConfig::validate() const {
  if (!(step >= 0.0)) throw InvalidArgument("relaxation step must be non-negative");
  if (support_size < 2) throw InvalidArgument("relaxation support needs at least one neighbour");
  if (!(sigma > 0.0)) throw InvalidArgument("relaxation shape parameter must be positive");
}

Vec2 relax_offset(const Vec2& p, std::span<const Vec2> neighbours, const RelaxConfig& config) {
  if (neighbours.empty()) throw InvalidArgument("relaxation needs a non-empty neighbourhood");
  double p_min = std::numeric_limits<double>::infinity();
  for (const Vec2& q : neighbours) p_min = std::min(p_min, (q - p).norm());
  if (!(p_min > 0.0)) throw InvalidArgument("neighbour coincides with the relaxed node");

  // -grad_p w(p - q) = 2 (p - q) / (sigma p_min)^2 * w.
  const double scale = config.sigma * p_min;
  Vec2 push = Vec2::Zero();
  for (const Vec2& q : neighbours) {
    const Vec2 r = p - q;
    const double w = std::exp(-r.squaredNorm() / (scale * scale));
    push += 2.0 * r / (scale * scale) * w;
  }
  return config.step * p_min * p_min * push;
}

NodeSet relax(const NodeSet& nodes, const RelaxConfig& config, unsigned threads) {
  config.validate();
  const std::size_t count = nodes.size();
  std::vector<Node> current = nodes.nodes();
  if (config.iterations == 0 || count < 2) return nodes;
  const std::size_t neighbours = std::min(config.support_size, count) - 1;
  const DomainShape& domain = nodes.domain();

  std::vector<Vec2> positions(count);
  std::vector<Vec2> offsets(count);
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    for (std::size_t i = 0; i < count; ++i) positions[i] = current[i].position;
    const KdTree tree(positions);
    parallel_for(count, threads, [&](std::size_t i) {
      offsets[i] = Vec2::Zero();
      if (current[i].is_boundary()) return;
      const Support s = tree.knn(positions[i], neighbours + 1);
      std::vector<Vec2> around;
      around.reserve(neighbours);
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.indices[k] != i) around.push_back(positions[s.indices[k]]);
      }
      around.resize(std::min(around.size(), neighbours));
      offsets[i] = relax_offset(positions[i], around, config);
    });

    for (std::size_t i = 0; i < count; ++i) {
      if (current[i].is_boundary()) continue;
      const Vec2 p = positions[i];
      const Vec2 step = offsets[i];
      const double len = step.norm();
      if (len == 0.0) continue;
      if (domain.contains(p + step)) {
        current[i].position = p + step;
        continue;
      }
      // Bisect for the boundary crossing, then stop short of it.
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (domain.contains(p + mid * step) ? lo : hi) = mid;
      }
      const double back = 1e-3 * current[i].spacing / len;
      const double t = std::max(0.0, lo - back);
      const Vec2 q = p + t * step;
      if (domain.contains(q)) current[i].position = q;
    }
    update_spacing(current);
  }
  return NodeSet(domain, std::move(current));
}

}  // namespace mlsm
