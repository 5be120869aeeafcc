#pragma once

#include "mlsm/elasticity.hpp"

namespace mlsm {

/// max_i max(|u - u*|, |v - v*|) / max_i max(|u*|, |v*|). Throws if the analytic field is zero.
double error_einf_displacement(const Displacements& numeric, const Displacements& analytic);

/// Same relative sup norm over the three stress components.
double error_einf_stress(const StressField& numeric, const StressField& analytic);

/// Sup-norm stress error divided by a reference stress (p0 for contact problems).
double error_einf_stress_scaled(const StressField& numeric, const StressField& analytic, double reference);

}  // namespace mlsm
