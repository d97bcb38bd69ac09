#include "qwire/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qwire/config.hpp"
#include "qwire/edge.hpp"
#include "qwire/error.hpp"
#include "qwire/index.hpp"
#include "qwire/io.hpp"
#include "qwire/oracle.hpp"
#include "qwire/spectral.hpp"

namespace qwire::cli {

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw IoError("malformed number '" + tok + "'");
    v.push_back(d);
  }
  return v;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> v;
  for (double d : parse_numbers(text)) {
    if (d != std::floor(d)) throw IoError("expected integers in '" + text + "'");
    v.push_back(static_cast<int>(d));
  }
  return v;
}

struct Common {
  std::string config;
  std::string output;
  int threads = 0;
};

struct SpectrumArgs {
  std::optional<double> lambda_min, lambda_max, sigma_tol;
  std::optional<int> grid, max_eigs;
};

void add_search_overrides(CLI::App* sub, SpectrumArgs& a) {
  sub->add_option("--lambda-min", a.lambda_min, "Lower end of the search range");
  sub->add_option("--lambda-max", a.lambda_max, "Upper end of the search range");
  sub->add_option("--grid", a.grid, "Scan grid points (>= 100)");
  sub->add_option("--sigma-tol", a.sigma_tol, "Root acceptance tolerance on sigma_min");
  sub->add_option("--max-eigs", a.max_eigs, "Maximum number of levels");
}

void apply_overrides(ProblemConfig& cfg, const SpectrumArgs& a) {
  if (a.lambda_min) cfg.solve.lambda_min = *a.lambda_min;
  if (a.lambda_max) cfg.solve.lambda_max = *a.lambda_max;
  if (a.grid) cfg.solve.grid = *a.grid;
  if (a.sigma_tol) cfg.solve.sigma_tol = *a.sigma_tol;
  if (a.max_eigs) cfg.solve.max_eigs = *a.max_eigs;
}

Spectrum solve_spectrum(const ProblemConfig& cfg, const UnitaryBC& u, const QuantumDomain& d,
                        int threads) {
  SearchOptions o = build_search(cfg);
  o.threads = threads;
  return find_eigenvalues(u, d, cfg.solve.lambda_min, cfg.solve.lambda_max, o);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and boundary-condition algebra for Schroedinger operators on interval unions",
               "qwire"};
  app.require_subcommand(1);
  Common common;
  SpectrumArgs sargs;
  std::function<void(std::ostream&)> action;

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Problem file")->required();
    sub->add_option("--output,-o", common.output, "Output path (default: standard output)");
    sub->add_option("--threads", common.threads, "Worker threads for the grid scan (0: auto)");
  };

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues in a range");
  with_config(spectrum);
  add_search_overrides(spectrum, sargs);
  spectrum->callback([&] {
    action = [&](std::ostream& o) {
      ProblemConfig cfg = load_config(common.config);
      apply_overrides(cfg, sargs);
      const QuantumDomain d = build_domain(cfg);
      write_spectrum(o, solve_spectrum(cfg, build_bc(cfg), d, common.threads));
    };
  });

  // eigenfunctions
  auto* eig = app.add_subcommand("eigenfunctions", "Normalized eigenfunctions on the sample grid");
  with_config(eig);
  add_search_overrides(eig, sargs);
  std::optional<double> eig_lambda;
  int samples = 257;
  eig->add_option("--lambda", eig_lambda, "A single eigenvalue (default: every level in range)");
  eig->add_option("--samples", samples, "Samples per interval (odd)");
  eig->callback([&] {
    action = [&](std::ostream& o) {
      ProblemConfig cfg = load_config(common.config);
      apply_overrides(cfg, sargs);
      const QuantumDomain d = build_domain(cfg);
      const UnitaryBC u = build_bc(cfg);
      std::vector<double> lambdas;
      if (eig_lambda) {
        lambdas.push_back(*eig_lambda);
      } else {
        for (const Level& l : solve_spectrum(cfg, u, d, common.threads).levels) lambdas.push_back(l.lambda);
      }
      EigenOptions eo;
      eo.sigma_tol = cfg.solve.sigma_tol;
      eo.ode.samples = samples;
      o << "# qwire-eigenfunctions v1\n# lambda mode interval x re im\n";
      for (double lambda : lambdas) {
        const auto pairs = eigenfunctions(u, d, lambda, eo);
        for (std::size_t mode = 0; mode < pairs.size(); ++mode)
          for (std::size_t k = 0; k < pairs[mode].samples.size(); ++k)
            for (Eigen::Index j = 0; j < pairs[mode].samples[k].size(); ++j)
              o << format_double(lambda) << ' ' << mode << ' ' << k + 1 << ' '
                << format_double(pairs[mode].x[k][j]) << ' '
                << format_double(pairs[mode].samples[k][j].real()) << ' '
                << format_double(pairs[mode].samples[k][j].imag()) << '\n';
      }
    };
  });

  // evolve
  auto* ev = app.add_subcommand("evolve", "Unitary evolution of an initial state by spectral sums");
  with_config(ev);
  add_search_overrides(ev, sargs);
  std::string initial_re, initial_im = "0", times_text;
  int modes = 64;
  ev->add_option("--initial-re", initial_re, "Real part of the initial state, expression in x")->required();
  ev->add_option("--initial-im", initial_im, "Imaginary part of the initial state");
  ev->add_option("--times", times_text, "Whitespace-separated times")->required();
  ev->add_option("--modes", modes, "Number of eigenfunctions in the expansion");
  ev->callback([&] {
    action = [&](std::ostream& o) {
      ProblemConfig cfg = load_config(common.config);
      apply_overrides(cfg, sargs);
      const QuantumDomain d = build_domain(cfg);
      const UnitaryBC u = build_bc(cfg);
      const Spectrum s = solve_spectrum(cfg, u, d, common.threads);
      EvolveOptions eo;
      eo.max_modes = modes;
      eo.eigen.sigma_tol = cfg.solve.sigma_tol;
      const Expr re = Expr::parse(initial_re), im = Expr::parse(initial_im);
      const auto grid = sample_grid(d, eo.eigen.ode.samples);
      std::vector<CVector> initial;
      for (const auto& xs : grid) {
        CVector v(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) v[j] = {re.eval(xs[j]), im.eval(xs[j])};
        initial.push_back(v);
      }
      const EvolveResult r = evolve(u, d, s, initial, parse_numbers(times_text), eo);
      o << "# modes " << r.lambdas.size() << '\n'
        << "# truncation_residual " << format_double(r.truncation_residual) << '\n'
        << "# norm_drift " << format_double(r.norm_drift) << '\n'
        << "# t x re im\n";
      for (std::size_t ti = 0; ti < r.times.size(); ++ti)
        for (std::size_t k = 0; k < r.x.size(); ++k)
          for (std::size_t j = 0; j < r.x[k].size(); ++j)
            o << format_double(r.times[ti]) << ' ' << format_double(r.x[k][j]) << ' '
              << format_double(r.states[ti][k][j].real()) << ' '
              << format_double(r.states[ti][k][j].imag()) << '\n';
    };
  });

  // maslov
  auto* maslov = app.add_subcommand("maslov", "Cayley and Maslov indices of a closed curve");
  std::string curve_path;
  maslov->add_option("--curve", curve_path, "Curve file")->required();
  maslov->add_option("--output,-o", common.output, "Output path");
  maslov->callback([&] {
    action = [&](std::ostream& o) {
      const UnitaryCurve c = read_curve_file(curve_path);
      const int cayley = cayley_index(c);
      const int winding = det_winding(c);
      if (cayley != winding)
        throw NumericError("Cayley index " + std::to_string(cayley) + " differs from det winding " +
                           std::to_string(winding) + "; refine the curve sampling");
      o << "cayley " << cayley << "\nwinding " << winding << "\nindex " << cayley << '\n';
    };
  });

  // edge-scan
  auto* edge = app.add_subcommand("edge-scan", "Lowest level of the rotated family e^{it} U");
  with_config(edge);
  std::string t_text = "1.0 0.5 0.2 0.1";
  std::optional<double> floor;
  edge->add_option("--t", t_text, "Descending rotation angles");
  edge->add_option("--floor", floor, "Search floor (default -10 cot^2(t/2) - 1)");
  edge->callback([&] {
    action = [&](std::ostream& o) {
      const ProblemConfig cfg = load_config(common.config);
      const QuantumDomain d = build_domain(cfg);
      EdgeScanOptions eo;
      eo.search_floor = floor;
      eo.search.threads = common.threads;
      const EdgeScan scan = edge_scan(build_bc(cfg), d, parse_numbers(t_text), eo);
      o << "# t lambda_min collar_mass\n";
      for (const EdgeScanEntry& e : scan.entries)
        o << format_double(e.t) << ' ' << format_double(e.lambda_min) << ' '
          << format_double(e.collar_mass) << '\n';
    };
  });

  // wire-check
  auto* wire = app.add_subcommand("wire-check", "Check that a boundary matrix glues endpoints as a wire");
  std::string bc_path, perm_text, phases_text;
  wire->add_option("--bc", bc_path, "Boundary matrix file")->required();
  wire->add_option("--perm", perm_text, "1-based endpoint permutation, e.g. \"2 1\"")->required();
  wire->add_option("--phases", phases_text, "Phases beta (default all zero)");
  wire->add_option("--output,-o", common.output, "Output path");
  wire->callback([&] {
    action = [&](std::ostream& o) {
      const MatrixFile f = read_matrix_file(bc_path);
      const UnitaryBC u(f.m);
      const WireReport r =
          verify_wire(u, make_wire_spec(parse_ints(perm_text), parse_numbers(phases_text)));
      o << (r.constraints_hold ? "PASS" : "FAIL");
      if (r.max_residual < 1e-10) o << " residual<1e-10";
      else o << " residual=" << format_double(r.max_residual);
      if (r.degenerate) o << " degenerate";
      o << '\n';
    };
  });

  // oracle-compare
  auto* oracle = app.add_subcommand("oracle-compare", "Compare with the finite-difference oracle");
  with_config(oracle);
  add_search_overrides(oracle, sargs);
  int cells = 2000, count = 5;
  oracle->add_option("--cells", cells, "Cells per interval for the coarse grid (200..4000)");
  oracle->add_option("--count", count, "Number of lowest eigenvalues to compare");
  oracle->callback([&] {
    action = [&](std::ostream& o) {
      ProblemConfig cfg = load_config(common.config);
      apply_overrides(cfg, sargs);
      const QuantumDomain d = build_domain(cfg);
      const UnitaryBC u = build_bc(cfg);
      const Spectrum s = solve_spectrum(cfg, u, d, common.threads);
      std::vector<double> spectral;
      for (const Level& l : s.levels)
        for (int m = 0; m < l.multiplicity; ++m) spectral.push_back(l.lambda);
      const FDSpectrum fd = fd_spectrum(u, d, cells, count);
      o << "# k lambda_spectral lambda_fd error_estimate status\n";
      for (int k = 0; k < count; ++k) {
        o << k + 1 << ' ';
        if (k >= static_cast<int>(spectral.size())) {
          o << "nan " << format_double(fd.values[k]) << ' ' << format_double(fd.error_estimate[k])
            << " MISSING\n";
          continue;
        }
        const bool ok = std::fabs(spectral[k] - fd.values[k]) <= fd.error_estimate[k];
        o << format_double(spectral[k]) << ' ' << format_double(fd.values[k]) << ' '
          << format_double(fd.error_estimate[k]) << (ok ? " PASS" : " FAIL") << '\n';
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qwire: usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (common.output.empty()) {
      action(out);
    } else {
      std::ostringstream buffer;
      action(buffer);
      std::ofstream file(common.output);
      if (!file) throw IoError("cannot write '" + common.output + "'");
      file << buffer.str();
      if (!file) throw IoError("failed writing '" + common.output + "'");
    }
  } catch (const NumericError& e) {
    err << "qwire: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const CayleySingular& e) {
    err << "qwire: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const DomainError& e) {
    err << "qwire: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "qwire: error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "qwire: error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace qwire::cli
