#include "qwire/edge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwire/error.hpp"

namespace qwire {

UnitaryBC rotate_bc(const UnitaryBC& u, double t) {
  return UnitaryBC(std::polar(1.0, t) * u.matrix());
}

double collar_mass(const QuantumDomain& d, const Eigenpair& e, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("collar fraction must be in (0, 1]");
  // trapezoid on the density, cut exactly at the collar edges
  double inside = 0.0, total = 0.0;
  for (std::size_t k = 0; k < e.samples.size(); ++k) {
    const Interval& iv = d.intervals[k];
    const Coefficients coef(iv);
    const double width = 0.5 * fraction * iv.length();
    const auto& x = e.x[k];
    auto density = [&](std::size_t j) { return std::norm(e.samples[k][j]) * std::sqrt(coef.metric(x[j])); };
    auto in_collar = [&](double lo, double hi) {
      return std::max(0.0, std::min(hi, iv.a + width) - lo) +
             std::max(0.0, hi - std::max(lo, iv.b - width));
    };
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      const double h = x[j + 1] - x[j];
      const double f0 = density(j), f1 = density(j + 1);
      total += 0.5 * h * (f0 + f1);
      double covered = std::min(in_collar(x[j], x[j + 1]), h);
      if (covered <= 0.0) continue;
      if (covered >= h) {
        inside += 0.5 * h * (f0 + f1);
        continue;
      }
      // partial cell: integrate the linear interpolant over the covered end
      auto integral = [&](double lo, double hi) {
        const double g0 = f0 + (f1 - f0) * (lo - x[j]) / h, g1 = f0 + (f1 - f0) * (hi - x[j]) / h;
        return 0.5 * (hi - lo) * (g0 + g1);
      };
      if (x[j] < iv.a + width) inside += integral(x[j], std::min(x[j + 1], iv.a + width));
      if (x[j + 1] > iv.b - width) inside += integral(std::max(x[j], iv.b - width), x[j + 1]);
    }
  }
  return inside / total;
}

namespace {

// Near-degenerate symmetric/antisymmetric edge pairs can share one grid cell of
// the coarse scan; zoom around the lowest root until the cell is far below the
// pair splitting or the window reaches relative width 1e-7.
double zoom_lowest(const UnitaryBC& u, const QuantumDomain& d, double lowest, double spacing,
                   const SearchOptions& base) {
  SearchOptions o = base;
  o.grid = 200;
  o.max_eigs = 1000;
  o.ode.rel_tol = std::min(base.ode.rel_tol, 1e-12);
  o.ode.abs_tol = std::min(base.ode.abs_tol, 1e-14);
  double half = 2.0 * spacing;
  while (half > 1e-7 * std::max(1.0, std::fabs(lowest))) {
    const Spectrum s = find_eigenvalues(u, d, lowest - half, lowest + half, o);
    if (!s.levels.empty()) lowest = std::min(lowest, s.levels.front().lambda);
    half *= 0.05;
  }
  return lowest;
}

}  // namespace

EdgeScan edge_scan(const UnitaryBC& u, const QuantumDomain& d, const std::vector<double>& t_list,
                   const EdgeScanOptions& opts) {
  if (cayley_degeneracy(u, -1) < 1)
    throw InvalidArgument("edge_scan needs a boundary condition with -1 in its spectrum");
  if (t_list.empty()) throw InvalidArgument("edge_scan needs at least one t value");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0 && t_list[i] <= kPi))
      throw InvalidArgument("edge_scan t values must lie in (0, pi]");
    if (i > 0 && !(t_list[i] < t_list[i - 1]))
      throw InvalidArgument("edge_scan t values must be strictly descending");
  }

  EdgeScan scan{u, {}, true, true};
  for (double t : t_list) {
    const double cot = 1.0 / std::tan(0.5 * t);
    const double floor = opts.search_floor.value_or(-10.0 * cot * cot - 1.0);
    if (!(floor < opts.search_cap)) throw InvalidArgument("edge_scan: search floor above cap");
    const double spacing = (opts.search_cap - floor) / (opts.search.grid - 1);

    const UnitaryBC ut = rotate_bc(u, t);
    // sigma_min still falling at the floor means a level sits below it
    if (spectral_sigma_min(ut, d, floor, opts.search.ode) <
        spectral_sigma_min(ut, d, floor + spacing, opts.search.ode))
      throw NumericError("edge_scan: sigma_min decreases towards the search floor; lower it (t=" +
                         std::to_string(t) + ")");
    const Spectrum s = find_eigenvalues(ut, d, floor, opts.search_cap, opts.search);
    if (s.levels.empty())
      throw NumericError("edge_scan: no eigenvalue below " + std::to_string(opts.search_cap) +
                         " at t=" + std::to_string(t));
    const double lowest = zoom_lowest(ut, d, s.levels.front().lambda, spacing, opts.search);
    if (lowest <= floor + spacing)
      throw NumericError("edge_scan: lowest eigenvalue at the search floor; lower it (t=" +
                         std::to_string(t) + ")");
    EdgeScanEntry entry;
    entry.t = t;
    entry.lambda_min = lowest;
    entry.ground_state = eigenfunctions(ut, d, lowest, opts.eigen).front();
    entry.collar_mass = collar_mass(d, entry.ground_state, opts.collar_fraction);
    scan.all_negative = scan.all_negative && lowest < -1e-9 * std::max(1.0, std::fabs(lowest));
    if (!scan.entries.empty() && !(lowest < scan.entries.back().lambda_min)) scan.decreasing = false;
    scan.entries.push_back(std::move(entry));
  }
  return scan;
}

}  // namespace qwire
