#include "mlsm/timing.hpp"

#include <numeric>
#include <ostream>

namespace mlsm {

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::kDomain: return "domain";
    case Phase::kSupport: return "support";
    case Phase::kRelaxation: return "relaxation";
    case Phase::kRefinement: return "refinement";
    case Phase::kShapes: return "shapes";
    case Phase::kAssembly: return "assembly";
    case Phase::kPreconditioner: return "preconditioner";
    case Phase::kSolve: return "solve";
    case Phase::kPostProcess: return "postprocess";
  }
  return "unknown";
}

double TimingReport::phase_sum() const { return std::accumulate(seconds_.begin(), seconds_.end(), 0.0); }

void TimingReport::write_csv(std::ostream& out) const {
  out << "phase,seconds\n";
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    out << phase_name(static_cast<Phase>(i)) << ',' << seconds_[i] << '\n';
  }
  out << "total," << total << '\n';
}

}  // namespace mlsm
