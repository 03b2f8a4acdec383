#include "optex/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace optex {

ProblemSpec parse_matrix_spec(const std::string& text) {
  ProblemSpec spec;
  if (text == "strakos") {
    spec.kind = ProblemKind::Strakos;
  } else if (text == "invdiag") {
    spec.kind = ProblemKind::InverseDiag;
  } else if (text == "convdiff") {
    spec.kind = ProblemKind::ConvDiff;
  } else if (text.rfind("mm:", 0) == 0 && text.size() > 3) {
    spec.kind = ProblemKind::MatrixMarket;
    spec.path = text.substr(3);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown matrix '" + text + "' (strakos, invdiag, convdiff, mm:<path>)");
  }
  return spec;
}

Problem build_problem(const ProblemSpec& spec, const TargetSpec& target, Index cap) {
  switch (spec.kind) {
    case ProblemKind::Strakos: {
      Problem p = gen_strakos(spec.n, spec.lam1, spec.lamn, spec.rho);
      const bool natural = (target.mode == TargetMode::LargestReal && spec.lam1 > spec.lamn) ||
                           (target.mode == TargetMode::LargestMagnitude && std::abs(spec.lam1) > std::abs(spec.lamn));
      return natural ? p : reference_eigenpair(p, target, cap);
    }
    case ProblemKind::InverseDiag: {
      Problem p = gen_inverse_diag(spec.n);
      return target.mode == TargetMode::SmallestMagnitude ? p : reference_eigenpair(p, target, cap);
    }
    case ProblemKind::ConvDiff:
      return reference_eigenpair(gen_convection_diffusion(spec.nx, spec.ny, spec.cx, spec.cy), target, cap);
    case ProblemKind::MatrixMarket:
      return reference_eigenpair(load_matrix_market(spec.path, spec.leading, cap), target, cap);
  }
  throw Error(ErrorKind::ConfigError, "unknown problem kind");
}

void ExperimentConfig::validate(Index n) const {
  if (strategies.empty()) throw Error(ErrorKind::ConfigError, "no strategies given");
  if (d < 1 || d > m || m > n) {
    throw Error(ErrorKind::ConfigError, "need 1 <= d <= m <= n (d=" + std::to_string(d) +
                                            ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  if (workers < 1) throw Error(ErrorKind::ConfigError, "workers must be >= 1");
}

namespace {

struct Measured {
  TraceRow row;
  std::optional<ResidualBasis> q;
};

Measured measure(const SubspaceState& s, const Vec& x, const TargetSpec& target, StrategyTag tag, Index k) {
  Measured out;
  TraceRow& row = out.row;
  row.k = k;
  row.strategy = tag;
  row.dim = s.dim();
  const Angles ang = angles(s.basis(), x);
  row.sin_angle = std::min(1.0, ang.sin);
  row.cos_angle = std::min(1.0, ang.cos);

  const auto pairs = ritz_pairs(s.op(), s.basis(), s.av(), &s.h());
  const EigenApprox ritz = select(pairs, target);
  row.rel_res_standard = ritz.res_norm;
  RefineOptions ro;
  ro.rq_refresh = true;
  row.rel_res_refined = refined_vector(s.op(), s.basis(), s.av(), ritz.value, ro).res_norm;

  try {
    out.q = residual_basis(s);
    row.rank_r = out.q->rank;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvariantSubspace) throw;
    row.rank_r = 0;
  }
  return out;
}

void halt(std::vector<TraceRow>& rows, std::string note) {
  rows.back().halted = true;
  rows.back().note = std::move(note);
}

std::vector<TraceRow> run_one(const Problem& problem, const Mat& v0, const Strategy& strategy,
                              const ExperimentConfig& cfg) {
  const Vec& x = problem.reference->x;
  std::vector<TraceRow> rows;
  SubspaceState s = SubspaceState::init(problem.a, v0);
  Measured cur = measure(s, x, cfg.target, strategy.tag, 0);
  rows.push_back(cur.row);
  Index k = 0;
  while (s.dim() < cfg.m) {
    if (!cur.q) {
      halt(rows, "invariant subspace");
      break;
    }
    try {
      ProposeOptions po;
      po.residual = &*cur.q;
      ExpansionProposal prop = propose(strategy, s, &x, po);
      OrthoBasis dirs = std::move(prop.directions);
      if (dirs.cols() > 1 && strategy.tag == StrategyTag::VR && s.dim() + dirs.cols() > cfg.m) {
        dirs = OrthoBasis::trusted(dirs.matrix().leftCols(cfg.m - s.dim()));
      }
      s = s.expand(dirs);
    } catch (const Error& e) {
      halt(rows, e.what());
      break;
    }
    ++k;
    cur = measure(s, x, cfg.target, strategy.tag, k);
    rows.push_back(cur.row);
  }
  return rows;
}

}  // namespace

std::vector<TraceRow> run_experiment(const Problem& problem, const ExperimentConfig& cfg) {
  cfg.validate(problem.size());
  if (!problem.reference) {
    throw Error(ErrorKind::ConfigError, "experiment needs a reference eigenpair");
  }
  const Mat v0 = random_start_basis(problem.size(), cfg.d, cfg.seed, !problem.a->real());

  const std::size_t ns = cfg.strategies.size();
  std::vector<std::vector<TraceRow>> per(ns);
  std::vector<std::exception_ptr> errors(ns);
  auto work = [&](std::size_t i) {
    try {
      per[i] = run_one(problem, v0, cfg.strategies[i], cfg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t nw = std::min<std::size_t>(cfg.workers, ns);
  if (nw <= 1) {
    for (std::size_t i = 0; i < ns; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nw; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < ns; i += nw) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TraceRow> rows;
  for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

std::vector<TraceRow> run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(build_problem(cfg.problem, cfg.target, cfg.cap), cfg);
}

std::vector<TraceRow> final_rows(const std::vector<TraceRow>& rows) {
  std::vector<TraceRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i + 1 == rows.size() || rows[i + 1].strategy != rows[i].strategy) out.push_back(rows[i]);
  }
  return out;
}

namespace {

void put_double(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string format_trace_csv(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += tag_name(r.strategy);
    out += ',';
    out += std::to_string(r.dim);
    for (double v : {r.sin_angle, r.cos_angle, r.rel_res_standard, r.rel_res_refined}) {
      out += ',';
      put_double(out, v);
    }
    out += ',';
    out += std::to_string(r.rank_r);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  if (rows.empty()) throw Error(ErrorKind::PreconditionViolated, "no trace rows to write");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  f << format_trace_csv(rows);
  f.close();
  if (!f) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != kTraceHeader) {
    throw Error(ErrorKind::ParseError, path + ":1: unexpected trace header");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": expected 8 fields");
    }
    auto num = [&](const std::string& c) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": bad number '" + c + "'");
      }
      return v;
    };
    auto integer = [&](const std::string& c) {
      char* end = nullptr;
      const long long v = std::strtoll(c.c_str(), &end, 10);
      if (end == c.c_str() || *end != '\0') {
        throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": bad integer '" + c + "'");
      }
      return static_cast<Index>(v);
    };
    TraceRow r;
    r.k = integer(cells[0]);
    try {
      r.strategy = parse_tag(cells[1]);
    } catch (const Error&) {
      throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": unknown strategy");
    }
    r.dim = integer(cells[2]);
    r.sin_angle = num(cells[3]);
    r.cos_angle = num(cells[4]);
    r.rel_res_standard = num(cells[5]);
    r.rel_res_refined = num(cells[6]);
    r.rank_r = integer(cells[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

PlotQuantity parse_plot_quantity(const std::string& text) {
  if (text == "sin_angle") return PlotQuantity::SinAngle;
  if (text == "rel_res_standard") return PlotQuantity::RelResStandard;
  if (text == "rel_res_refined") return PlotQuantity::RelResRefined;
  throw Error(ErrorKind::ConfigError, "unknown plot quantity '" + text + "'");
}

const char* to_string(PlotQuantity q) noexcept {
  switch (q) {
    case PlotQuantity::SinAngle: return "sin_angle";
    case PlotQuantity::RelResStandard: return "rel_res_standard";
    case PlotQuantity::RelResRefined: return "rel_res_refined";
  }
  return "unknown";
}

}  // namespace optex
