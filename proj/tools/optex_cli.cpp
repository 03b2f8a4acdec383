#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optex/harness.hpp"
#include "optex/oracle.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitIo = 4;

int exit_code_for(optex::ErrorKind kind) {
  using optex::ErrorKind;
  switch (kind) {
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
      return kExitIo;
    case ErrorKind::ConfigError:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::TooLarge:
    case ErrorKind::PreconditionViolated:
      return kExitConfig;
    default:
      return 1;
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunArgs {
  std::string matrix = "strakos";
  optex::ProblemSpec spec;
  std::string strategies = "stand,ritzV,ritzR,rRitzR,optimal";
  std::string target = "largest-real";
  std::optional<double> tau_re;
  double tau_im = 0.0;
  std::string out;
  std::string plot;
  std::string plot_quantity = "sin_angle";
  optex::ExperimentConfig cfg;
};

void add_problem_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--matrix", a.matrix, "strakos, invdiag, convdiff or mm:<path>");
  cmd->add_option("--n", a.spec.n, "order of generated diagonal matrices");
  cmd->add_option("--lam1", a.spec.lam1, "Strakos lambda_1");
  cmd->add_option("--lamn", a.spec.lamn, "Strakos lambda_n");
  cmd->add_option("--rho", a.spec.rho, "Strakos rho");
  cmd->add_option("--nx", a.spec.nx, "convection-diffusion grid width");
  cmd->add_option("--ny", a.spec.ny, "convection-diffusion grid height");
  cmd->add_option("--cx", a.spec.cx, "convection coefficient along x");
  cmd->add_option("--cy", a.spec.cy, "convection coefficient along y");
  cmd->add_option("--leading", a.spec.leading, "keep the leading principal submatrix of this order");
}

optex::ProblemSpec resolve_spec(const RunArgs& a) {
  optex::ProblemSpec spec = a.spec;
  const optex::ProblemSpec parsed = optex::parse_matrix_spec(a.matrix);
  spec.kind = parsed.kind;
  spec.path = parsed.path;
  return spec;
}

int cmd_run(RunArgs& a) {
  optex::ExperimentConfig& cfg = a.cfg;
  cfg.problem = resolve_spec(a);
  cfg.target = optex::parse_target(a.target);
  cfg.output = a.out;

  std::optional<optex::Complex> tau;
  if (a.tau_re) {
    tau = optex::Complex(*a.tau_re, a.tau_im);
  } else if (cfg.target.mode == optex::TargetMode::ClosestTo) {
    tau = cfg.target.tau;
  }
  for (const auto& name : split(a.strategies, ',')) {
    const optex::StrategyTag tag = optex::parse_tag(name);
    const bool harmonic = tag == optex::StrategyTag::HarmonicR || tag == optex::StrategyTag::RHarmonicR;
    if (harmonic && !tau) {
      throw optex::Error(optex::ErrorKind::ConfigError,
                         "strategy '" + name + "' needs --tau or a closest-to target");
    }
    cfg.strategies.push_back(optex::Strategy::make(tag, cfg.target, harmonic ? tau : std::nullopt));
  }
  const optex::PlotQuantity quantity = optex::parse_plot_quantity(a.plot_quantity);

  const optex::Problem problem = optex::build_problem(cfg.problem, cfg.target, cfg.cap);
  const auto rows = optex::run_experiment(problem, cfg);
  optex::write_trace_csv(rows, cfg.output);
  if (!a.plot.empty()) optex::emit_plot(rows, a.plot, quantity);

  std::printf("%s  lambda = %.17g%+.17gi\n", problem.label.c_str(), problem.reference->lambda.real(),
              problem.reference->lambda.imag());
  std::printf("%-12s %6s %6s %24s %24s %24s %7s\n", "strategy", "k", "dim", "sin_angle", "rel_res_standard",
              "rel_res_refined", "rank_R");
  for (const auto& r : optex::final_rows(rows)) {
    std::printf("%-12s %6lld %6lld %24.17g %24.17g %24.17g %7lld%s%s\n", optex::tag_name(r.strategy),
                static_cast<long long>(r.k), static_cast<long long>(r.dim), r.sin_angle, r.rel_res_standard,
                r.rel_res_refined, static_cast<long long>(r.rank_r), r.halted ? "  halted: " : "",
                r.note.c_str());
  }
  return 0;
}

void print_report(const char* title, const optex::IdentitySweep& s) {
  const optex::IdentityReport& w = s.worst;
  std::printf("%s (%lld instances)\n", title, static_cast<long long>(s.instances));
  const std::pair<const char*, double> fields[] = {
      {"cos_split", w.cos_split},
      {"max_vs_bw", w.max_vs_bw},
      {"bw_vs_proj", w.bw_vs_proj},
      {"bw_forms", w.bw_forms},
      {"wopt_forms", w.wopt_forms},
      {"aw_direction", w.aw_direction},
      {"cos_orth", w.cos_orth},
      {"cos_vr", w.cos_vr},
      {"mu_opt", w.mu_opt},
  };
  for (const auto& [name, value] : fields) std::printf("  %-18s %.3e\n", name, value);
}

int cmd_verify(optex::Index n, optex::Index k, optex::Index instances, std::uint64_t seed, double tol) {
  const optex::IdentitySweep general = optex::identity_sweep(n, k, instances, seed, false);
  const optex::IdentitySweep hermitian = optex::identity_sweep(n, k, instances, seed + 1, true);
  print_report("non-Hermitian", general);
  print_report("Hermitian", hermitian);
  std::printf("  %-18s %.3e\n", "max |phi - lambda|", hermitian.max_phi_gap);
  const double worst = std::max(general.max_entry, hermitian.max_entry);
  const bool ok = worst <= tol && hermitian.max_phi_gap <= 1e-10;
  std::printf("%s: max discrepancy %.3e (tolerance %.1e)\n", ok ? "OK" : "FAILED", worst, tol);
  return ok ? 0 : kExitVerify;
}

int cmd_gen(const RunArgs& a) {
  const optex::ProblemSpec spec = resolve_spec(a);
  optex::Problem p;
  switch (spec.kind) {
    case optex::ProblemKind::Strakos: p = optex::gen_strakos(spec.n, spec.lam1, spec.lamn, spec.rho); break;
    case optex::ProblemKind::InverseDiag: p = optex::gen_inverse_diag(spec.n); break;
    case optex::ProblemKind::ConvDiff: p = optex::gen_convection_diffusion(spec.nx, spec.ny, spec.cx, spec.cy); break;
    case optex::ProblemKind::MatrixMarket:
      throw optex::Error(optex::ErrorKind::ConfigError, "gen writes generated matrices only");
  }
  optex::write_matrix_market(p.a->dense(), a.out);
  std::printf("wrote %s (%lld x %lld, %lld nonzeros)\n", a.out.c_str(), static_cast<long long>(p.size()),
              static_cast<long long>(p.size()), static_cast<long long>(p.a->nonzeros()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace expansion experiments for exterior eigenpairs"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "expand from d to m per strategy and write a trace CSV");
  run_cmd->set_config("--config", "", "read options from a TOML/INI file");
  add_problem_options(run_cmd, run);
  run_cmd->add_option("--d", run.cfg.d, "initial dimension")->required();
  run_cmd->add_option("--m", run.cfg.m, "final dimension")->required();
  run_cmd->add_option("--seed", run.cfg.seed, "seed for the start basis")->required();
  run_cmd->add_option("--strategies", run.strategies, "comma-separated strategy list");
  run_cmd->add_option("--target", run.target, "largest-real, largest-magnitude, smallest-magnitude, closest-to:<re>,<im>");
  run_cmd->add_option("--tau", run.tau_re, "harmonic shift (real part)");
  run_cmd->add_option("--tau-imag", run.tau_im, "harmonic shift (imaginary part)");
  run_cmd->add_option("--out", run.out, "trace CSV path")->required();
  run_cmd->add_option("--plot", run.plot, "SVG plot path");
  run_cmd->add_option("--plot-quantity", run.plot_quantity, "sin_angle, rel_res_standard or rel_res_refined");
  run_cmd->add_option("--workers", run.cfg.workers, "parallel strategy workers");
  run_cmd->add_option("--cap", run.cfg.cap, "largest dense order allowed");

  optex::Index vn = 30, vk = 6, vinst = 100;
  std::uint64_t vseed = 7;
  double vtol = 1e-8;
  CLI::App* verify_cmd = app.add_subcommand("verify", "random-instance sweep of the expansion identities");
  verify_cmd->add_option("--n", vn, "matrix order");
  verify_cmd->add_option("--k", vk, "subspace dimension");
  verify_cmd->add_option("--instances", vinst, "instances per matrix class");
  verify_cmd->add_option("--seed", vseed, "sweep seed");
  verify_cmd->add_option("--tol", vtol, "largest accepted discrepancy");

  RunArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a generated matrix in Matrix Market format");
  add_problem_options(gen_cmd, gen);
  gen_cmd->add_option("--out", gen.out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*verify_cmd) return cmd_verify(vn, vk, vinst, vseed, vtol);
    if (*gen_cmd) return cmd_gen(gen);
  } catch (const optex::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
