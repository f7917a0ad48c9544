#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twophase/mesh.hpp"
#include "twophase/problems.hpp"

namespace twophase {

enum class Method { RM, ARM, RARM };

std::string to_string(Method m);

struct OptimizerConfig {
  Method method = Method::RM;
  /// Stop when ||f_{k+1} - f_k||_{L2} <= epsilon.
  double epsilon = 0.0;
  int max_iter = 500;
  /// Extrapolation weight as a function of the (restart-shifted) iteration
  /// index. Defaults to k/(k+3); ignored by RM.
  std::function<double(int)> schedule;
};

struct IterationRecord {
  int k = 0;
  double objective = 0.0;  ///< objective of f_{k+1}
  double diff_l2 = 0.0;    ///< ||f_{k+1} - f_k||_{L2}
  double theta = 0.0;      ///< extrapolation weight used to build the proposal
  bool restarted = false;  ///< RARM rejected the extrapolated proposal
};

enum class Termination { DiffZero, Epsilon, MaxIter };

std::string to_string(Termination t);

struct History {
  double initial_objective = 0.0;
  std::vector<IterationRecord> records;
  BangBangDensity final_density;
  Evaluation final_evaluation;  ///< evaluation at final_density
  Termination reason = Termination::MaxIter;
  int solves = 0;                  ///< number of problem evaluations
  double worst_consistency = 0.0;  ///< max Evaluation::consistency over all solves

  int iterations() const { return static_cast<int>(records.size()); }
  int restarts() const;
};

/// Indicator of the cells holding the largest g values, taken greedily in
/// descending order (ties by ascending cell index) while the cumulative area
/// stays <= volume.
Indicator bathtub_threshold(std::span<const double> g, const Mesh& mesh, double volume);

/// g_now + theta (g_now - g_prev).
CellField extrapolate(std::span<const double> g_now, std::span<const double> g_prev,
                      double theta);

/// Default momentum schedule k/(k+3).
double nesterov_theta(int k);

/// Rearrangement iteration (RM, accelerated ARM, or restarted RARM) from an
/// admissible f0. Throws InvalidArgument for a non-admissible start.
History run(const Problem& problem, const BangBangDensity& f0, const OptimizerConfig& config);

}  // namespace twophase
