#include "qwire/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qwire/error.hpp"
#include "qwire/io.hpp"

namespace qwire {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& v, int line) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw IoError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
  return d;
}

int to_int(const std::string& v, int line) {
  char* end = nullptr;
  const long d = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw IoError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

template <class T, class Conv>
std::vector<T> to_list(const std::string& v, int line, Conv conv) {
  std::istringstream in(v);
  std::vector<T> out;
  std::string tok;
  while (in >> tok) out.push_back(conv(tok, line));
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    if constexpr (std::is_same_v<T, double>) out += format_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

ProblemConfig parse_config(const std::string& text, const std::string& base_dir) {
  ProblemConfig cfg;
  cfg.base_dir = base_dir;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "interval") cfg.intervals.emplace_back();
      else if (section != "bc" && section != "solve")
        throw IoError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto unknown = [&] {
      return IoError("line " + std::to_string(line_no) + ": unknown key '" + key + "' in [" + section + "]");
    };
    if (section == "interval") {
      IntervalSpec& iv = cfg.intervals.back();
      if (key == "a") iv.a = to_double(value, line_no);
      else if (key == "b") iv.b = to_double(value, line_no);
      else if (key == "metric") iv.metric = value;
      else if (key == "potential") iv.potential = value;
      else throw unknown();
    } else if (section == "bc") {
      BcSpec& bc = cfg.bc;
      if (key == "kind") bc.kind = value;
      else if (key == "file") bc.file = value;
      else if (key == "theta") bc.theta = to_double(value, line_no);
      else if (key == "alpha_re") bc.alpha_re = to_double(value, line_no);
      else if (key == "alpha_im") bc.alpha_im = to_double(value, line_no);
      else if (key == "beta_re") bc.beta_re = to_double(value, line_no);
      else if (key == "beta_im") bc.beta_im = to_double(value, line_no);
      else if (key == "perm") bc.perm = to_list<int>(value, line_no, to_int);
      else if (key == "phases") bc.phases = to_list<double>(value, line_no, to_double);
      else throw unknown();
    } else if (section == "solve") {
      SolveSpec& s = cfg.solve;
      if (key == "lambda_min") s.lambda_min = to_double(value, line_no);
      else if (key == "lambda_max") s.lambda_max = to_double(value, line_no);
      else if (key == "grid") s.grid = to_int(value, line_no);
      else if (key == "sigma_tol") s.sigma_tol = to_double(value, line_no);
      else if (key == "max_eigs") s.max_eigs = to_int(value, line_no);
      else throw unknown();
    } else {
      throw IoError("line " + std::to_string(line_no) + ": key outside of a section");
    }
  }
  if (cfg.intervals.empty()) throw IoError("config defines no [interval]");
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), dir.empty() ? "." : dir.string());
}

std::string serialize_config(const ProblemConfig& cfg) {
  std::ostringstream out;
  for (const IntervalSpec& iv : cfg.intervals) {
    out << "[interval]\n"
        << "a = " << format_double(iv.a) << '\n'
        << "b = " << format_double(iv.b) << '\n'
        << "metric = " << iv.metric << '\n'
        << "potential = " << iv.potential << "\n\n";
  }
  const BcSpec& bc = cfg.bc;
  out << "[bc]\nkind = " << bc.kind << '\n';
  if (!bc.file.empty()) out << "file = " << bc.file << '\n';
  if (bc.kind == "quasiperiodic" || bc.kind == "u2") out << "theta = " << format_double(bc.theta) << '\n';
  if (bc.kind == "u2") {
    out << "alpha_re = " << format_double(bc.alpha_re) << '\n'
        << "alpha_im = " << format_double(bc.alpha_im) << '\n'
        << "beta_re = " << format_double(bc.beta_re) << '\n'
        << "beta_im = " << format_double(bc.beta_im) << '\n';
  }
  if (!bc.perm.empty()) out << "perm = " << join(bc.perm) << '\n';
  if (!bc.phases.empty()) out << "phases = " << join(bc.phases) << '\n';
  const SolveSpec& s = cfg.solve;
  out << "\n[solve]\n"
      << "lambda_min = " << format_double(s.lambda_min) << '\n'
      << "lambda_max = " << format_double(s.lambda_max) << '\n'
      << "grid = " << s.grid << '\n'
      << "sigma_tol = " << format_double(s.sigma_tol) << '\n'
      << "max_eigs = " << s.max_eigs << '\n';
  return out.str();
}

QuantumDomain build_domain(const ProblemConfig& cfg) {
  QuantumDomain d;
  for (const IntervalSpec& spec : cfg.intervals)
    d.intervals.push_back({spec.a, spec.b, Expr::parse(spec.metric), Expr::parse(spec.potential)});
  validate_domain(d);
  return d;
}

WireSpec make_wire_spec(const std::vector<int>& perm_one_based, const std::vector<double>& phases) {
  WireSpec spec;
  for (int p : perm_one_based) spec.sigma.push_back(p - 1);
  spec.beta = phases.empty() ? std::vector<double>(perm_one_based.size(), 0.0) : phases;
  return spec;
}

UnitaryBC build_bc(const ProblemConfig& cfg) {
  const int n = static_cast<int>(cfg.intervals.size());
  const BcSpec& bc = cfg.bc;
  auto matrix_from_file = [&] {
    if (bc.file.empty()) throw IoError("bc kind '" + bc.kind + "' needs a 'file' key");
    std::filesystem::path p(bc.file);
    if (p.is_relative()) p = std::filesystem::path(cfg.base_dir) / p;
    MatrixFile f = read_matrix_file(p.string());
    if (f.n != n || f.m.rows() != 2 * n || f.m.cols() != 2 * n)
      throw IoError("bc matrix must be " + std::to_string(2 * n) + " x " + std::to_string(2 * n));
    return f.m;
  };
  UnitaryBC u = make_neumann(n);
  if (bc.kind == "dirichlet") u = make_dirichlet(n);
  else if (bc.kind == "neumann") u = make_neumann(n);
  else if (bc.kind == "robin") u = cayley_to_unitary(CayleyOperator(matrix_from_file()));
  else if (bc.kind == "unitary") u = UnitaryBC(matrix_from_file());
  else if (bc.kind == "wire") u = make_wire(make_wire_spec(bc.perm, bc.phases));
  else if (bc.kind == "quasiperiodic") u = make_quasiperiodic(bc.theta);
  else if (bc.kind == "u2") u = make_u2(bc.theta, {bc.alpha_re, bc.alpha_im}, {bc.beta_re, bc.beta_im});
  else throw IoError("unknown bc kind '" + bc.kind + "'");
  if (u.n() != n) throw IoError("bc dimension does not match the number of intervals");
  return u;
}

SearchOptions build_search(const ProblemConfig& cfg) {
  SearchOptions o;
  o.grid = cfg.solve.grid;
  o.sigma_tol = cfg.solve.sigma_tol;
  o.max_eigs = cfg.solve.max_eigs;
  return o;
}

}  // namespace qwire
