#pragma once

#include "mlsm/elasticity.hpp"
#include "mlsm/nodeset.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace mlsm {

/// `x,y,u,v,sxx,syy,sxy,svm` per node, SI units.
void write_fields_csv(std::ostream& out, const NodeSet& nodes, const Displacements& disp,
                      const StressField& stress);

/// Legacy-text VTK unstructured points with displacement vectors and stress scalars.
void write_fields_vtk(std::ostream& out, const NodeSet& nodes, const Displacements& disp,
                      const StressField& stress);

struct SweepRow {
  std::size_t nodes = 0;
  /// Empty when the case has no analytic displacement or the run failed.
  std::optional<double> error_displacement;
  std::optional<double> error_stress;
  double seconds = 0.0;
  /// Sweep parameter (perturbation magnitude, seed, ...); not written when absent.
  std::optional<double> parameter;
};

/// `N,e_inf_u,e_inf_sigma,t_total` rows, with a leading `param` column when any row has one.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace mlsm
