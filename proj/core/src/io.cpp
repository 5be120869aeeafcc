#include "mlsm/io.hpp"

#include <algorithm>
#include <ostream>

namespace mlsm {

void write_fields_csv(std::ostream& out, const NodeSet& nodes, const Displacements& disp,
                      const StressField& stress) {
  const auto old = out.precision(17);
  const std::vector<double> svm = stress.von_mises();
  out << "x,y,u,v,sxx,syy,sxy,svm\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Vec2& p = nodes[i].position;
    out << p.x() << ',' << p.y() << ',' << disp.u[i] << ',' << disp.v[i] << ',' << stress.xx[i] << ','
        << stress.yy[i] << ',' << stress.xy[i] << ',' << svm[i] << '\n';
  }
  out.precision(old);
}

void write_fields_vtk(std::ostream& out, const NodeSet& nodes, const Displacements& disp,
                      const StressField& stress) {
  const auto old = out.precision(17);
  const std::size_t n = nodes.size();
  out << "# vtk DataFile Version 3.0\nmlsm fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const Node& node : nodes.nodes()) out << node.position.x() << ' ' << node.position.y() << " 0\n";
  out << "CELLS " << n << ' ' << 2 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "1 " << i << '\n';
  out << "CELL_TYPES " << n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "1\n";
  out << "POINT_DATA " << n << '\n';
  out << "VECTORS displacement double\n";
  for (std::size_t i = 0; i < n; ++i) out << disp.u[i] << ' ' << disp.v[i] << " 0\n";
  const std::vector<double> svm = stress.von_mises();
  auto scalars = [&](const char* name, const std::vector<double>& values) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << v << '\n';
  };
  scalars("sxx", stress.xx);
  scalars("syy", stress.yy);
  scalars("sxy", stress.xy);
  scalars("von_mises", svm);
  out.precision(old);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  const auto old = out.precision(17);
  const bool with_param = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.parameter; });
  if (with_param) out << "param,";
  out << "N,e_inf_u,e_inf_sigma,t_total\n";
  for (const SweepRow& r : rows) {
    if (with_param) {
      if (r.parameter) out << *r.parameter;
      out << ',';
    }
    out << r.nodes << ',';
    if (r.error_displacement) out << *r.error_displacement;
    out << ',';
    if (r.error_stress) out << *r.error_stress;
    out << ',' << r.seconds << '\n';
  }
  out.precision(old);
}

}  // namespace mlsm
