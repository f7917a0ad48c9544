#include "twophase/oned.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "twophase/errors.hpp"

namespace twophase::oned {

namespace {

// f_- + delta (f_+ - f_-), the mean density.
double mean_density(const OneDParams& p) { return p.f_minus + p.delta * p.contrast(); }

double log_linear_rate(std::span<const double> ks, std::span<const double> ys) {
  if (ks.size() < 3) throw InvalidArgument("fit_rate: fewer than 3 usable points");
  std::vector<double> logs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] == 0.0 || !std::isfinite(ys[i])) {
      throw InvalidArgument("fit_rate: zero or non-finite value in fitted tail");
    }
    logs[i] = std::log(std::abs(ys[i]));
  }
  const double n = static_cast<double>(ks.size());
  const double mk = std::accumulate(ks.begin(), ks.end(), 0.0) / n;
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - mk) * (logs[i] - ml);
    sxx += (ks[i] - mk) * (ks[i] - mk);
  }
  return std::exp(sxy / sxx);
}

std::size_t tail_start(std::size_t n, double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
    throw InvalidArgument("fit_rate: tail_fraction must lie in (0,1]");
  }
  const auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  return n - std::min(n, count);
}

}  // namespace

double branch_point(const OneDParams& p) {
  return std::max(3.0 * p.delta - 1.0, p.delta * (p.f_minus + p.f_plus) / mean_density(p));
}

double map_h(double y, const OneDParams& p) {
  if (!(std::abs(y) <= 1.0)) {
    std::ostringstream msg;
    msg << "map_h: state " << y << " outside [-1,1]";
    throw DomainError(msg.str());
  }
  if (y < 0.0) return -map_h(-y, p);

  const double alpha = mean_density(p);
  const double contrast = p.contrast();
  if (y > branch_point(p)) return p.delta / alpha * contrast * (1.0 - y);

  const double a = p.f_plus * p.delta;
  const double shift = y * p.delta * contrast * alpha;
  const double radicand = a * a - shift;
  if (radicand < 0.0) {
    std::ostringstream msg;
    msg << "map_h: negative square-root argument at y=" << y << " (f_-=" << p.f_minus
        << ", f_+=" << p.f_plus << ", delta=" << p.delta << ")";
    throw DomainError(msg.str());
  }
  // a - sqrt(a^2 - s) written as s / (a + sqrt(a^2 - s)) to keep relative
  // accuracy as y -> 0.
  return y - 2.0 / contrast * (shift / (a + std::sqrt(radicand)));
}

double rate_L(const OneDParams& p) {
  p.validate();
  return (1.0 - p.f_minus / p.f_plus) * (1.0 - p.delta);
}

double theta_star(double L) {
  if (!(L > 0.0 && L < 1.0)) throw DomainError("theta_star: L must lie in (0,1)");
  // (1 - sqrt(1-L))^2 / L written without the cancellation at small L.
  const double q = 1.0 + std::sqrt(1.0 - L);
  return L / (q * q);
}

double r_star(double L) {
  if (!(L > 0.0 && L < 1.0)) throw DomainError("r_star: L must lie in (0,1)");
  return L / (1.0 + std::sqrt(1.0 - L));
}

double nesterov_map_theta(int k) {
  return k <= 0 ? 0.0 : static_cast<double>(k - 1) / (k + 2);
}

std::vector<MapIterate> iterate_map(MapMethod method, double y0, const OneDParams& p, int n,
                                    std::function<double(int)> schedule) {
  p.validate();
  if (!(std::abs(y0) <= 1.0)) throw InvalidArgument("iterate_map: y0 outside [-1,1]");
  if (n < 0) throw InvalidArgument("iterate_map: negative step count");
  if (!schedule) schedule = nesterov_map_theta;
  const double fixed_theta = method == MapMethod::OptimalARM ? theta_star(rate_L(p)) : 0.0;

  std::vector<MapIterate> out{{0, y0}};
  double prev = y0, y = y0;
  for (int k = 0; k < n && std::abs(y) >= 1e-300; ++k) {
    double theta = 0.0;
    if (method == MapMethod::ModifiedARM) theta = schedule(k);
    if (method == MapMethod::OptimalARM) theta = fixed_theta;
    if (theta < 0.0 || theta > 1.0) throw InvalidArgument("iterate_map: theta outside [0,1]");
    const double extrapolated = std::clamp(y + theta * (y - prev), -1.0, 1.0);
    prev = y;
    y = map_h(extrapolated, p);
    out.push_back({k + 1, y});
  }
  return out;
}

double fit_rate(std::span<const double> sequence, double tail_fraction) {
  const std::size_t start = tail_start(sequence.size(), tail_fraction);
  std::vector<double> ks;
  for (std::size_t i = start; i < sequence.size(); ++i) ks.push_back(static_cast<double>(i));
  return log_linear_rate(ks, sequence.subspan(start));
}

double fit_envelope_rate(std::span<const double> sequence, double tail_fraction) {
  const std::size_t start = tail_start(sequence.size(), tail_fraction);
  std::vector<double> ks, peaks;
  for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < sequence.size(); ++i) {
    const double m = std::abs(sequence[i]);
    if (m >= std::abs(sequence[i - 1]) && m >= std::abs(sequence[i + 1])) {
      ks.push_back(static_cast<double>(i));
      peaks.push_back(m);
    }
  }
  return log_linear_rate(ks, peaks);
}

FdHistory fd_rm_1d(int n, const OneDParams& p, double c0, int max_iter) {
  p.validate();
  if (n < 64) throw InvalidArgument("fd_rm_1d: need at least 64 cells");
  if (!(c0 - p.delta >= -1.0 - 1e-12) || !(c0 + p.delta <= 1.0 + 1e-12)) {
    throw InvalidArgument("fd_rm_1d: initial support [c0-delta, c0+delta] leaves [-1,1]");
  }
  const double h = 2.0 / n;
  const int support = static_cast<int>(std::floor(p.delta * n * (1.0 + 1e-12)));
  if (support < 1 || support >= n) throw InvalidArgument("fd_rm_1d: delta too small for grid");

  Indicator d(n, 0);
  {
    const int first = std::clamp(static_cast<int>(std::lround((c0 - p.delta + 1.0) / h)), 0,
                                 n - support);
    std::fill(d.begin() + first, d.begin() + first + support, 1);
  }

  auto center_offset = [&](const Indicator& ind) {
    double sum = 0.0;
    int count = 0;
    for (int c = 0; c < n; ++c) {
      if (ind[c]) {
        sum += -1.0 + (c + 0.5) * h;
        ++count;
      }
    }
    return sum / count;
  };

  // Interior nodes 1..n-1; stiffness tridiag(-1, 2, -1)/h, lumped P1 load.
  const int m = n - 1;
  std::vector<double> u(n + 1), rhs(m), cp(m), dp(m);
  std::vector<double> means(n);
  std::vector<int> order(n);

  FdHistory hist;
  hist.cell_width = h;
  for (int k = 0; k < max_iter; ++k) {
    for (int i = 1; i < n; ++i) {
      const double f_left = d[i - 1] ? p.f_plus : p.f_minus;
      const double f_right = d[i] ? p.f_plus : p.f_minus;
      rhs[i - 1] = 0.5 * h * (f_left + f_right);
    }
    const double diag = 2.0 / h, off = -1.0 / h;
    cp[0] = off / diag;
    dp[0] = rhs[0] / diag;
    for (int i = 1; i < m; ++i) {
      const double denom = diag - off * cp[i - 1];
      cp[i] = off / denom;
      dp[i] = (rhs[i] - off * dp[i - 1]) / denom;
    }
    u[0] = u[n] = 0.0;
    u[m] = dp[m - 1];
    for (int i = m - 2; i >= 0; --i) u[i + 1] = dp[i] - cp[i] * u[i + 2];

    for (int c = 0; c < n; ++c) means[c] = 0.5 * (u[c] + u[c + 1]);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return means[a] > means[b]; });
    Indicator next(n, 0);
    for (int j = 0; j < support; ++j) next[order[j]] = 1;

    int changed = 0;
    for (int c = 0; c < n; ++c) changed += next[c] != d[c];
    const double diff = p.contrast() * std::sqrt(changed * h);
    hist.records.push_back({k, center_offset(d), diff});
    if (changed == 0) {
      hist.converged = true;
      break;
    }
    d = std::move(next);
  }
  hist.final_indicator = std::move(d);
  return hist;
}

}  // namespace twophase::oned
