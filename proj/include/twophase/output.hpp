#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twophase/mesh.hpp"
#include "twophase/rearrange.hpp"

namespace twophase {

/// Header `k,objective,diff_l2,theta,restarted`; reals with 17 significant digits.
void write_history_csv(std::ostream& out, std::span<const IterationRecord> records);

/// Legacy ASCII VTK unstructured grid of triangles (z = 0) with optional
/// CELL_DATA scalar "f" and POINT_DATA scalar "u". Empty spans are omitted.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> cell_f,
               std::span<const double> point_u);

/// Standalone SVG with log-scaled polylines of |objective - final objective|
/// and diff_l2 against k. Non-positive values are skipped.
void write_convergence_svg(std::ostream& out, std::span<const IterationRecord> records,
                           const std::string& title);

}  // namespace twophase
