#pragma once

#include <functional>
#include <span>
#include <vector>

#include "twophase/problems.hpp"

namespace twophase::oned {

/// Two-phase data on the interval; same invariants as ProblemParams.
using OneDParams = ProblemParams;

/// Threshold map of the 1D extremal Poisson problem, y -> h(y). y is the
/// offset of the f_+ support from its optimal position. Extended to
/// [-1, 0) as the odd reflection h(-y) = -h(y). Throws DomainError when the
/// square root in the lower branch has a negative argument.
double map_h(double y, const OneDParams& p);

/// Switch point of the two branches of map_h.
double branch_point(const OneDParams& p);

/// Slope of map_h at its fixed point: (1 - f_-/f_+)(1 - delta).
double rate_L(const OneDParams& p);

/// Extrapolation weight that merges the two characteristic roots of the
/// linearized accelerated recurrence. Throws DomainError unless 0 < L < 1.
double theta_star(double L);

/// Resulting double root 1 - sqrt(1 - L).
double r_star(double L);

enum class MapMethod { RM, ModifiedARM, OptimalARM };

/// theta_k = (k-1)/(k+2), with theta_0 = 0.
double nesterov_map_theta(int k);

struct MapIterate {
  int k;
  double y;
};

/// Iterates y_{k+1} = h(y_k + theta_k (y_k - y_{k-1})), y_{-1} = y_0.
/// theta is 0 for RM, `schedule` (default nesterov_map_theta) for
/// ModifiedARM and theta_star(rate_L) for OptimalARM. The extrapolated
/// point is clamped to [-1, 1]. Returns y_0..y_n, stopping early once
/// |y| < 1e-300.
std::vector<MapIterate> iterate_map(MapMethod method, double y0, const OneDParams& p, int n,
                                    std::function<double(int)> schedule = {});

/// Geometric rate exp(slope) of a least-squares fit of log|y_k| against k
/// over the last tail_fraction of the sequence. Throws InvalidArgument with
/// fewer than 3 points or a zero in the tail.
double fit_rate(std::span<const double> sequence, double tail_fraction = 0.5);

/// Same fit restricted to the local maxima of |y_k| (the envelope of an
/// oscillating trajectory), positioned at their own k.
double fit_envelope_rate(std::span<const double> sequence, double tail_fraction = 0.5);

struct FdRecord {
  int k;
  double offset;   ///< center of the f_+ support minus the domain midpoint
  double diff_l2;  ///< ||f_{k+1} - f_k||_{L2}
};

struct FdHistory {
  std::vector<FdRecord> records;
  Indicator final_indicator;
  double cell_width = 0.0;
  bool converged = false;  ///< reached a fixed point of the threshold map
};

/// Independent finite-difference rearrangement on [-1, 1]: second-difference
/// Dirichlet solve of -u'' = f on n cells, cell means of u thresholded to
/// total length 2 delta. The initial support is centered at c0.
FdHistory fd_rm_1d(int n, const OneDParams& p, double c0, int max_iter = 1000);

}  // namespace twophase::oned
