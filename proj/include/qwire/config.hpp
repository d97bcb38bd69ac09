#pragma once

#include <string>
#include <vector>

#include "qwire/bc.hpp"
#include "qwire/domain.hpp"
#include "qwire/spectral.hpp"

namespace qwire {

// Problem file: line-oriented "key = value" pairs under [interval] (repeatable),
// [bc] and [solve] section headers; '#' starts a comment line.
//
//   [interval]  a, b, metric, potential
//   [bc]        kind = dirichlet | neumann | robin | unitary | wire | quasiperiodic | u2
//               file (robin: Hermitian A, unitary: U), theta,
//               alpha_re, alpha_im, beta_re, beta_im (u2),
//               perm (1-based endpoint permutation), phases (wire)
//   [solve]     lambda_min, lambda_max, grid, sigma_tol, max_eigs

struct IntervalSpec {
  double a = 0.0, b = 1.0;
  std::string metric = "1";
  std::string potential = "0";

  bool operator==(const IntervalSpec&) const = default;
};

struct BcSpec {
  std::string kind = "dirichlet";
  std::string file;
  double theta = 0.0;
  double alpha_re = 1.0, alpha_im = 0.0, beta_re = 0.0, beta_im = 0.0;
  std::vector<int> perm;  // 1-based
  std::vector<double> phases;

  bool operator==(const BcSpec&) const = default;
};

struct SolveSpec {
  double lambda_min = -1.0;
  double lambda_max = 10.0;
  int grid = 400;
  double sigma_tol = 1e-7;
  int max_eigs = 1000;

  bool operator==(const SolveSpec&) const = default;
};

struct ProblemConfig {
  std::vector<IntervalSpec> intervals;
  BcSpec bc;
  SolveSpec solve;
  /// Directory against which a relative bc file is resolved.
  std::string base_dir;

  bool operator==(const ProblemConfig& o) const {
    return intervals == o.intervals && bc == o.bc && solve == o.solve;
  }
};

/// Throws IoError / ParseError on malformed input.
ProblemConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ProblemConfig load_config(const std::string& path);
std::string serialize_config(const ProblemConfig& cfg);

/// Parses expressions and validates the domain.
QuantumDomain build_domain(const ProblemConfig& cfg);
UnitaryBC build_bc(const ProblemConfig& cfg);
SearchOptions build_search(const ProblemConfig& cfg);

/// Parses "2 1 4 3" style 1-based permutations into a 0-based WireSpec.
WireSpec make_wire_spec(const std::vector<int>& perm_one_based, const std::vector<double>& phases);

}  // namespace qwire
