#include "twophase/rearrange.hpp"

#include <algorithm>
#include <numeric>

#include "twophase/errors.hpp"

namespace twophase {

std::string to_string(Method m) {
  switch (m) {
    case Method::RM: return "rm";
    case Method::ARM: return "arm";
    case Method::RARM: return "rarm";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::DiffZero: return "diff_zero";
    case Termination::Epsilon: return "epsilon";
    case Termination::MaxIter: return "max_iter";
  }
  return "?";
}

int History::restarts() const {
  return static_cast<int>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.restarted; }));
}

Indicator bathtub_threshold(std::span<const double> g, const Mesh& mesh, double volume) {
  if (g.size() != mesh.num_cells()) {
    throw InvalidArgument("bathtub_threshold: field length does not match mesh");
  }
  std::vector<int> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&g](int a, int b) { return g[a] > g[b]; });

  // Relative slack absorbs rounding in the cumulative sum, so V = m |T| on
  // a uniform mesh admits exactly m cells.
  const double limit = volume * (1.0 + 1e-12);
  Indicator d(g.size(), 0);
  double filled = 0.0;
  for (int c : order) {
    filled += mesh.cell_area()[c];
    if (filled > limit) break;
    d[c] = 1;
  }
  return d;
}

CellField extrapolate(std::span<const double> g_now, std::span<const double> g_prev,
                      double theta) {
  if (g_now.size() != g_prev.size()) throw InvalidArgument("extrapolate: length mismatch");
  CellField out(g_now.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g_now[i] + theta * (g_now[i] - g_prev[i]);
  return out;
}

double nesterov_theta(int k) { return static_cast<double>(k) / (k + 3); }

History run(const Problem& problem, const BangBangDensity& f0, const OptimizerConfig& config) {
  const Mesh& mesh = problem.mesh();
  f0.params.validate();
  if (!is_admissible(f0, mesh)) {
    throw InvalidArgument("initial density is not admissible for the target volume");
  }
  if (config.epsilon < 0.0 || config.max_iter < 1) {
    throw InvalidArgument("optimizer needs epsilon >= 0 and max_iter >= 1");
  }
  const auto schedule = config.schedule ? config.schedule : std::function<double(int)>(nesterov_theta);
  const double volume = f0.params.target_volume(mesh.total_area());
  const Sense sense = problem.sense();

  History h;
  auto evaluate = [&](const BangBangDensity& f, std::span<const double> guess) {
    auto e = problem.evaluate(f, guess);
    ++h.solves;
    h.worst_consistency = std::max(h.worst_consistency, e.consistency);
    return e;
  };

  BangBangDensity current = f0;
  Evaluation eval = evaluate(current, {});
  h.initial_objective = eval.objective;
  CellField prev_gradient;
  int k0 = 0;

  for (int k = 0; k < config.max_iter; ++k) {
    double theta = 0.0;
    if (k > 0) {
      if (config.method == Method::ARM) theta = schedule(k);
      if (config.method == Method::RARM) theta = schedule(k - k0);
    }

    const CellField g = theta != 0.0 ? extrapolate(eval.gradient, prev_gradient, theta)
                                     : eval.gradient;
    BangBangDensity next{bathtub_threshold(g, mesh, volume), current.params};

    IterationRecord rec;
    rec.k = k;
    rec.theta = theta;

    if (next.indicator == current.indicator) {
      rec.objective = eval.objective;
      rec.diff_l2 = 0.0;
      h.records.push_back(rec);
      h.reason = Termination::DiffZero;
      break;
    }

    Evaluation next_eval = evaluate(next, eval.state);
    if (config.method == Method::RARM && theta != 0.0 &&
        !improves(sense, next_eval.objective, eval.objective)) {
      // Rejected extrapolation: restart the momentum counter and take the
      // plain rearrangement step from the current derivative.
      k0 = k;
      rec.restarted = true;
      rec.theta = 0.0;
      next.indicator = bathtub_threshold(eval.gradient, mesh, volume);
      if (next.indicator == current.indicator) {
        rec.objective = eval.objective;
        h.records.push_back(rec);
        h.reason = Termination::DiffZero;
        break;
      }
      next_eval = evaluate(next, eval.state);
    }

    rec.diff_l2 = l2_distance(next.indicator, current.indicator, current.params, mesh);
    rec.objective = next_eval.objective;
    h.records.push_back(rec);

    prev_gradient = std::move(eval.gradient);
    eval = std::move(next_eval);
    current = std::move(next);

    if (rec.diff_l2 <= config.epsilon) {
      h.reason = Termination::Epsilon;
      break;
    }
  }

  h.final_density = std::move(current);
  h.final_evaluation = std::move(eval);
  return h;
}

}  // namespace twophase
