#pragma once

#include <array>
#include <chrono>
#include <iosfwd>
#include <string_view>

namespace mlsm {

enum class Phase {
  kDomain = 0,
  kSupport,
  kRelaxation,
  kRefinement,
  kShapes,
  kAssembly,
  kPreconditioner,
  kSolve,
  kPostProcess,
};
inline constexpr std::size_t kPhaseCount = 9;

std::string_view phase_name(Phase phase);

/// Wall-clock seconds per solution phase.
class TimingReport {
 public:
  void add(Phase phase, double seconds) { seconds_[static_cast<std::size_t>(phase)] += seconds; }
  double seconds(Phase phase) const { return seconds_[static_cast<std::size_t>(phase)]; }
  double phase_sum() const;

  /// Wall time of the whole run; never less than phase_sum() when phases are disjoint.
  double total = 0.0;

  /// `phase,seconds` rows followed by `total`.
  void write_csv(std::ostream& out) const;

 private:
  std::array<double, kPhaseCount> seconds_{};
};

/// Adds the lifetime of the object to one phase of a report.
class ScopedPhase {
 public:
  ScopedPhase(TimingReport& report, Phase phase)
      : report_(report), phase_(phase), start_(std::chrono::steady_clock::now()) {}
  ~ScopedPhase() {
    report_.add(phase_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
  }
  ScopedPhase(const ScopedPhase&) = delete;
  ScopedPhase& operator=(const ScopedPhase&) = delete;

 private:
  TimingReport& report_;
  Phase phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mlsm
