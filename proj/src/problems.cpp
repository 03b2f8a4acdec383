#include "optex/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace optex {

Problem Problem::make(Mat a, std::optional<ReferencePair> reference, std::string label) {
  Problem p;
  p.a = make_operator(std::move(a));
  if (reference) {
    const double nrm = reference->x.norm();
    if (!(std::abs(nrm - 1.0) <= 1e-12)) {
      throw Error(ErrorKind::PreconditionViolated, "reference vector must have unit length");
    }
    const double res = (p.a->apply(reference->x) - reference->lambda * reference->x).norm();
    if (!(res <= 1e-10 * p.a->norm1())) {
      throw Error(ErrorKind::PreconditionViolated, "reference pair residual exceeds 1e-10 ||A||_1");
    }
  }
  p.reference = std::move(reference);
  p.label = std::move(label);
  return p;
}

Problem gen_inverse_diag(Index n) {
  if (n < 2) throw Error(ErrorKind::ConfigError, "inverse-diag needs n >= 2");
  Mat a = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = 1.0 / static_cast<double>(i + 1);
  Vec x = Vec::Zero(n);
  x(n - 1) = 1.0;
  const Complex lambda = a(n - 1, n - 1);
  return Problem::make(std::move(a), ReferencePair{lambda, std::move(x)},
                       "invdiag(n=" + std::to_string(n) + ")");
}

double strakos_eigenvalue(Index i, Index n, double lam1, double lamn, double rho) {
  const double t = static_cast<double>(i - 1) / static_cast<double>(n - 1);
  return lam1 + t * (lamn - lam1) * std::pow(rho, static_cast<double>(n - i));
}

Problem gen_strakos(Index n, double lam1, double lamn, double rho) {
  if (n < 2) throw Error(ErrorKind::ConfigError, "strakos needs n >= 2");
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(ErrorKind::ConfigError, "strakos needs 0 < rho <= 1");
  if (!(lam1 != lamn) || !std::isfinite(lam1) || !std::isfinite(lamn)) {
    throw Error(ErrorKind::ConfigError, "strakos needs finite lambda_1 != lambda_n");
  }
  Mat a = Mat::Zero(n, n);
  for (Index i = 1; i <= n; ++i) a(i - 1, i - 1) = strakos_eigenvalue(i, n, lam1, lamn, rho);
  Vec x = Vec::Zero(n);
  x(0) = 1.0;
  std::ostringstream label;
  label << "strakos(n=" << n << ",lam1=" << lam1 << ",lamn=" << lamn << ",rho=" << rho << ")";
  const Complex lambda = a(0, 0);
  return Problem::make(std::move(a), ReferencePair{lambda, std::move(x)}, label.str());
}

Problem gen_convection_diffusion(Index nx, Index ny, double cx, double cy) {
  if (nx < 2 || ny < 1) throw Error(ErrorKind::ConfigError, "convection-diffusion needs nx >= 2, ny >= 1");
  const Index n = nx * ny;
  Mat a = Mat::Zero(n, n);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index p = j * nx + i;
      a(p, p) = -4.0;
      if (i > 0) a(p, p - 1) = 1.0 + cx;
      if (i + 1 < nx) a(p, p + 1) = 1.0 - cx;
      if (j > 0) a(p, p - nx) = 1.0 + cy;
      if (j + 1 < ny) a(p, p + nx) = 1.0 - cy;
    }
  }
  std::ostringstream label;
  label << "convdiff(" << nx << "x" << ny << ",cx=" << cx << ",cy=" << cy << ")";
  return Problem::make(std::move(a), std::nullopt, label.str());
}

double convection_diffusion_rightmost(Index nx, Index ny, double cx, double cy) {
  const double pi = std::acos(-1.0);
  const double ex = 2.0 * std::sqrt(1.0 - cx * cx) * std::cos(pi / static_cast<double>(nx + 1));
  const double ey = 2.0 * std::sqrt(1.0 - cy * cy) * std::cos(pi / static_cast<double>(ny + 1));
  return -4.0 + ex + ey;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_error(const std::string& path, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line) + ": " + what);
}

struct Reader {
  std::ifstream in;
  std::string path;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
};

MatrixMarketHeader parse_header(Reader& r) {
  std::string line;
  if (!r.next(line)) parse_error(r.path, 1, "empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") parse_error(r.path, r.line_no, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_error(r.path, r.line_no, "object must be 'matrix'");
  if (format == "array") throw Error(ErrorKind::UnsupportedFormat, r.path + ": array format is not supported");
  if (format != "coordinate") parse_error(r.path, r.line_no, "unknown format '" + format + "'");
  if (field == "pattern") throw Error(ErrorKind::UnsupportedFormat, r.path + ": pattern field is not supported");
  if (field != "real" && field != "integer" && field != "complex" && field != "double") {
    parse_error(r.path, r.line_no, "unknown field '" + field + "'");
  }
  if (field == "double") field = "real";
  if (symmetry == "skew-symmetric") {
    throw Error(ErrorKind::UnsupportedFormat, r.path + ": skew-symmetric storage is not supported");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian") {
    parse_error(r.path, r.line_no, "unknown symmetry '" + symmetry + "'");
  }

  MatrixMarketHeader h;
  h.field = field;
  h.symmetry = symmetry;
  while (r.next(line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size(line);
    long long rows = 0, cols = 0, nnz = 0;
    std::string extra;
    if (!(size >> rows >> cols >> nnz) || (size >> extra)) parse_error(r.path, r.line_no, "bad size line");
    if (rows < 1 || cols < 1 || nnz < 0) parse_error(r.path, r.line_no, "bad dimensions");
    h.rows = rows;
    h.cols = cols;
    h.entries = nnz;
    return h;
  }
  parse_error(r.path, r.line_no + 1, "missing size line");
}

Reader open_reader(const std::string& path) {
  Reader r;
  r.path = path;
  r.in.open(path);
  if (!r.in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return r;
}

}  // namespace

MatrixMarketHeader read_matrix_market_header(const std::string& path) {
  Reader r = open_reader(path);
  return parse_header(r);
}

Problem load_matrix_market(const std::string& path, Index leading, Index cap) {
  Reader r = open_reader(path);
  const MatrixMarketHeader h = parse_header(r);
  if (h.rows != h.cols) parse_error(path, r.line_no, "matrix must be square");
  if (leading < 0 || leading > h.rows) {
    throw Error(ErrorKind::ConfigError, "leading order must lie in [0, " + std::to_string(h.rows) + "]");
  }
  const Index n = leading > 0 ? leading : h.rows;
  if (n > cap) {
    throw Error(ErrorKind::TooLarge, path + ": order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  const bool complex_field = h.field == "complex";
  Mat a = Mat::Zero(n, n);
  std::string line;
  Index seen = 0;
  while (seen < h.entries) {
    if (!r.next(line)) parse_error(path, r.line_no + 1, "expected " + std::to_string(h.entries) + " entries, found " + std::to_string(seen));
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> i >> j >> re)) parse_error(path, r.line_no, "bad entry");
    if (complex_field && !(ls >> im)) parse_error(path, r.line_no, "complex entry needs two values");
    std::string extra;
    if (ls >> extra) parse_error(path, r.line_no, "trailing data in entry");
    if (i < 1 || i > h.rows || j < 1 || j > h.cols) parse_error(path, r.line_no, "index out of range");
    if (!std::isfinite(re) || !std::isfinite(im)) parse_error(path, r.line_no, "non-finite value");
    if (h.symmetry != "general" && j > i) parse_error(path, r.line_no, "upper-triangle entry in symmetric storage");
    ++seen;
    if (i > n || j > n) continue;
    const Complex v(re, im);
    a(i - 1, j - 1) += v;
    if (i != j) {
      if (h.symmetry == "symmetric") a(j - 1, i - 1) += v;
      if (h.symmetry == "hermitian") a(j - 1, i - 1) += std::conj(v);
    }
  }
  while (r.next(line)) {
    if (line.find_first_not_of(" \t") != std::string::npos && line[0] != '%') {
      parse_error(path, r.line_no, "more entries than declared");
    }
  }
  std::string label = "mm:" + path;
  if (leading > 0) label += "[" + std::to_string(leading) + "]";
  return Problem::make(std::move(a), std::nullopt, std::move(label));
}

void write_matrix_market(const Mat& a, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  const bool real = is_real(a);
  Index nnz = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) nnz += a(i, j) != Complex(0.0, 0.0);
  }
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate %s general\n", real ? "real" : "complex");
  std::fprintf(f, "%lld %lld %lld\n", static_cast<long long>(a.rows()), static_cast<long long>(a.cols()),
               static_cast<long long>(nnz));
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex v = a(i, j);
      if (v == Complex(0.0, 0.0)) continue;
      if (real) {
        std::fprintf(f, "%lld %lld %.17g\n", static_cast<long long>(i + 1), static_cast<long long>(j + 1), v.real());
      } else {
        std::fprintf(f, "%lld %lld %.17g %.17g\n", static_cast<long long>(i + 1), static_cast<long long>(j + 1),
                     v.real(), v.imag());
      }
    }
  }
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

Problem reference_eigenpair(const Problem& p, const TargetSpec& target, Index cap) {
  const Mat& a = p.a->dense();
  const auto eig = eig_dense(a, cap);
  std::vector<EigenApprox> pairs;
  pairs.reserve(eig.size());
  for (const auto& e : eig) {
    EigenApprox ap;
    ap.value = e.value;
    ap.ambient = e.vector / e.vector.norm();
    ap.coeffs = ap.ambient;
    pairs.push_back(std::move(ap));
  }
  const EigenApprox& best = pairs[select_index(pairs, target)];
  Problem out;
  out.a = p.a;
  out.label = p.label;
  const double res = (p.a->apply(best.ambient) - best.value * best.ambient).norm();
  if (!(res <= 1e-10 * p.a->norm1())) {
    throw Error(ErrorKind::NoConvergence, "reference eigenpair residual exceeds 1e-10 ||A||_1");
  }
  out.reference = ReferencePair{best.value, best.ambient};
  return out;
}

Mat random_start_basis(Index n, Index d, std::uint64_t seed, bool complex_entries) {
  if (d < 1 || d > n) throw Error(ErrorKind::ConfigError, "start basis needs 1 <= d <= n");
  Rng rng(seed);
  return orthonormalize(random_gaussian(n, d, rng, complex_entries)).basis.matrix();
}

}  // namespace optex
