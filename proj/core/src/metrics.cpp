#include "mlsm/metrics.hpp"

#include <cmath>

namespace mlsm {

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw InvalidArgument("numeric and analytic fields differ in size");
}

double stress_sup_diff(const StressField& numeric, const StressField& analytic) {
  require_same_size(numeric.size(), analytic.size());
  require_same_size(numeric.yy.size(), analytic.yy.size());
  require_same_size(numeric.xy.size(), analytic.xy.size());
  return std::max({sup_diff(numeric.xx, analytic.xx), sup_diff(numeric.yy, analytic.yy),
                   sup_diff(numeric.xy, analytic.xy)});
}

}  // namespace

double error_einf_displacement(const Displacements& numeric, const Displacements& analytic) {
  require_same_size(numeric.u.size(), analytic.u.size());
  require_same_size(numeric.v.size(), analytic.v.size());
  const double scale = std::max(sup_abs(analytic.u), sup_abs(analytic.v));
  if (scale == 0.0) throw InvalidArgument("analytic displacement is identically zero");
  return std::max(sup_diff(numeric.u, analytic.u), sup_diff(numeric.v, analytic.v)) / scale;
}

double error_einf_stress(const StressField& numeric, const StressField& analytic) {
  const double scale = std::max({sup_abs(analytic.xx), sup_abs(analytic.yy), sup_abs(analytic.xy)});
  if (scale == 0.0) throw InvalidArgument("analytic stress is identically zero");
  return stress_sup_diff(numeric, analytic) / scale;
}

double error_einf_stress_scaled(const StressField& numeric, const StressField& analytic, double reference) {
  if (!(reference > 0.0)) throw InvalidArgument("reference stress must be positive");
  return stress_sup_diff(numeric, analytic) / reference;
}

}  // namespace mlsm
