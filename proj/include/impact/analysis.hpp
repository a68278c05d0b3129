#pragma once
//! \file analysis.hpp
//! \brief Discrete L1 errors, grid-convergence tables and post-shock
//! oscillation diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "impact/reference.hpp"
#include "impact/solver.hpp"

namespace impact {

enum class Field { rho, u, p };

inline const char* to_string(Field f) {
  switch (f) {
    case Field::rho:
      return "rho";
    case Field::u:
      return "u";
    default:
      return "p";
  }
}

inline double component(const PrimitiveState& q, Field f) {
  switch (f) {
    case Field::rho:
      return q.rho;
    case Field::u:
      return q.u;
    default:
      return q.p;
  }
}

/// dx * sum_i |q_i - q_exact(x_i, t)| with the reference sampled at cell centres.
inline double l1_error(const Grid& grid, std::span<const PrimitiveState> prims,
                       const ImpactSolution& sol, double t, Field field) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const PrimitiveState exact = evaluate(sol, grid.centers[i], t);
    sum += std::abs(component(prims[i], field) - component(exact, field));
  }
  return grid.dx * sum;
}

inline double l1_error(const SimulationResult& result, const ImpactSolution& sol, Field field) {
  const auto prims = final_primitives(result, sol.gas);
  return l1_error(result.grid, prims, sol, result.t_final, field);
}

struct ErrorSample {
  std::size_t m = 0;
  double e_rho = 0.0;
  double e_u = 0.0;
  double e_p = 0.0;
};

struct ConvergenceRow {
  std::size_t m = 0;
  double e_rho = 0.0;
  double e_u = 0.0;
  double e_p = 0.0;
  /// Unset on the first row and whenever either error is zero.
  std::optional<double> kappa_rho;
  std::optional<double> kappa_u;
  std::optional<double> kappa_p;
};

/// Observed order between successive doubling-family grids.
inline std::optional<double> convergence_rate(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) return std::nullopt;
  return std::log2(e_coarse / e_fine);
}

/// True when every entry follows m_{k+1} = 2 m_k - 1.
inline bool is_doubling_family(std::span<const std::size_t> ms) {
  for (std::size_t k = 1; k < ms.size(); ++k) {
    if (ms[k] != 2 * ms[k - 1] - 1) return false;
  }
  return true;
}

inline std::vector<std::size_t> doubling_family(std::size_t min_m, std::size_t max_m) {
  if (min_m < 3) throw ConfigError("resolution m must satisfy m >= 3");
  std::vector<std::size_t> ms;
  for (std::size_t m = min_m; m <= max_m; m = 2 * m - 1) ms.push_back(m);
  return ms;
}

inline std::vector<ConvergenceRow> convergence_table(std::span<const ErrorSample> samples) {
  std::vector<ErrorSample> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ErrorSample& a, const ErrorSample& b) { return a.m < b.m; });
  std::vector<ConvergenceRow> rows;
  rows.reserve(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    ConvergenceRow row{sorted[k].m, sorted[k].e_rho, sorted[k].e_u, sorted[k].e_p,
                       std::nullopt, std::nullopt, std::nullopt};
    if (k > 0) {
      row.kappa_rho = convergence_rate(sorted[k - 1].e_rho, row.e_rho);
      row.kappa_u = convergence_rate(sorted[k - 1].e_u, row.e_u);
      row.kappa_p = convergence_rate(sorted[k - 1].e_p, row.e_p);
    }
    rows.push_back(row);
  }
  return rows;
}

/// A member run of a convergence study failed.
class StudyError : public std::runtime_error {
 public:
  StudyError(std::size_t m, const std::string& what)
      : std::runtime_error("resolution m=" + std::to_string(m) + " failed: " + what), m_(m) {}
  [[nodiscard]] std::size_t resolution() const { return m_; }

 private:
  std::size_t m_;
};

inline ErrorSample measure(const RunConfig& cfg, const ImpactSolution& sol) {
  const SimulationResult r = run(cfg);
  const auto prims = final_primitives(r, cfg.gas);
  return {cfg.m, l1_error(r.grid, prims, sol, r.t_final, Field::rho),
          l1_error(r.grid, prims, sol, r.t_final, Field::u),
          l1_error(r.grid, prims, sol, r.t_final, Field::p)};
}

/// Runs `tmpl` at every resolution and tabulates errors and rates.
/// Member runs execute on up to `jobs` threads (0: hardware concurrency);
/// rows are assembled in increasing m regardless of completion order.
inline std::vector<ConvergenceRow> convergence_study(std::span<const std::size_t> resolutions,
                                                     const RunConfig& tmpl,
                                                     const ImpactSolution& sol,
                                                     unsigned jobs = 0) {
  if (resolutions.empty()) throw ConfigError("empty resolution list");
  std::vector<std::size_t> ms(resolutions.begin(), resolutions.end());
  std::sort(ms.begin(), ms.end());
  if (!is_doubling_family(ms)) {
    throw ConfigError("resolutions must follow m_{k+1} = 2 m_k - 1");
  }
  for (std::size_t m : ms) {
    if (m < 3) throw ConfigError("resolution m must satisfy m >= 3");
  }
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  std::map<std::size_t, ErrorSample> done;
  // Largest first so the long runs start early.
  std::vector<std::size_t> queue(ms.rbegin(), ms.rend());
  std::size_t next = 0;
  while (next < queue.size()) {
    std::vector<std::pair<std::size_t, std::future<ErrorSample>>> batch;
    for (unsigned j = 0; j < jobs && next < queue.size(); ++j, ++next) {
      RunConfig cfg = tmpl;
      cfg.m = queue[next];
      batch.emplace_back(cfg.m, std::async(std::launch::async, [cfg, &sol] {
                           return measure(cfg, sol);
                         }));
    }
    for (auto& [m, fut] : batch) {
      try {
        done[m] = fut.get();
      } catch (const std::exception& e) {
        for (auto& [m2, f2] : batch) {
          if (f2.valid()) f2.wait();
        }
        throw StudyError(m, e.what());
      }
    }
  }
  std::vector<ErrorSample> samples;
  for (const auto& [m, s] : done) samples.push_back(s);
  return convergence_table(samples);
}

struct OscillationReport {
  /// Half-open index ranges of the analysed cells: the post-shock region on
  /// either side of the contact.
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::size_t cell_count = 0;
  double band_width = 0.0;
  double total_variation = 0.0;
  double alternation_fraction = 0.0;
  std::size_t cluster_count = 0;
};

/// Single-linkage clusters of `values` with gap threshold `gap`.
inline std::size_t count_clusters(std::vector<double> values, double gap) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  std::size_t clusters = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] > gap) ++clusters;
  }
  return clusters;
}

/// Density diagnostics over one or more runs of consecutive cells.
/// Differences are taken only within a run, never across a gap.
inline OscillationReport oscillation_metrics(std::span<const std::vector<double>> runs) {
  OscillationReport r;
  std::vector<double> all;
  std::size_t flips = 0;
  std::size_t interior = 0;
  for (const auto& rho : runs) {
    all.insert(all.end(), rho.begin(), rho.end());
    for (std::size_t i = 1; i < rho.size(); ++i) r.total_variation += std::abs(rho[i] - rho[i - 1]);
    for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
      ++interior;
      if ((rho[i + 1] - rho[i]) * (rho[i] - rho[i - 1]) < 0.0) ++flips;
    }
  }
  if (all.empty()) throw std::invalid_argument("oscillation region is empty (margin too large)");
  r.cell_count = all.size();
  const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
  r.band_width = *hi - *lo;
  if (interior > 0) {
    r.alternation_fraction = static_cast<double>(flips) / static_cast<double>(interior);
  }
  r.cluster_count = count_clusters(std::move(all), 0.2 * r.band_width);
  return r;
}

inline OscillationReport oscillation_metrics(std::span<const double> rho) {
  const std::vector<std::vector<double>> runs{{rho.begin(), rho.end()}};
  return oscillation_metrics(runs);
}

/// Analyses the post-shock density: cells strictly between the two outer
/// waves with `margin_cells` cells trimmed next to each shock and on both
/// sides of the contact (x = u* t), where the start-up error of the impact
/// sits.
inline OscillationReport oscillation_report(const SimulationResult& result,
                                            const ImpactSolution& sol, std::size_t margin_cells) {
  const Grid& g = result.grid;
  const double t = result.t_final;
  const double margin = static_cast<double>(margin_cells) * g.dx;
  const double lo = sol.star.s_left * t + margin;
  const double hi = sol.star.s_right * t - margin;
  const double contact = sol.star.u_star * t;

  auto inside = [&](double x) {
    return x > lo && x < hi && std::abs(x - contact) > margin;
  };
  OscillationReport report;
  std::vector<std::vector<double>> runs;
  for (std::size_t i = 0; i < g.m;) {
    if (!inside(g.centers[i])) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::vector<double> rho;
    for (; i < g.m && inside(g.centers[i]); ++i) {
      rho.push_back(cons_to_prim(result.final_states[i], sol.gas).rho);
    }
    report.segments.emplace_back(first, i);
    runs.push_back(std::move(rho));
  }
  OscillationReport metrics = oscillation_metrics(runs);
  metrics.segments = std::move(report.segments);
  return metrics;
}

}  // namespace impact
