// bohrgap: abscissa bounds, verification suites and experiments for the
// M-homogeneous Dirichlet series construction.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bohrgap/errors.hpp"
#include "bohrgap/experiments.hpp"
#include "bohrgap/kronecker_search.hpp"
#include "bohrgap/report_io.hpp"

namespace {

using namespace bohrgap;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct Common {
  int M = 2;
  std::string rho = "1,1";
  std::optional<double> X;
  int Lmax = 0;  // 0: per-command default
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";

  ConstructionParams params() const { return ConstructionParams::parse(M, rho, X, Lmax > 0 ? Lmax : 6); }
  int levels(int fallback) const { return Lmax > 0 ? Lmax : fallback; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--M", c.M, "homogeneity M")->capture_default_str();
  cmd->add_option("--rho", c.rho, "block exponents, comma list, fractions allowed")->capture_default_str();
  cmd->add_option("--X", c.X, "decay exponent override (default (rho_1+..+rho_M)(M+1)/(2M))");
  cmd->add_option("--Lmax", c.Lmax, "number of levels");
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--seed", c.seed, "seed for randomized procedures")->capture_default_str();
  cmd->add_option("--format", c.format, "report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidParameter("cannot open " + c.out + " for writing");
  f << text;
}

template <class Report>
void emit_report(const Common& c, std::string_view kind, const Report& rep, const CsvTable& csv) {
  emit(c, c.format == "json" ? envelope(kind, json(rep)).dump(2) + "\n" : csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abscissa bounds and numerical experiments for an M-homogeneous Dirichlet series"};
  app.require_subcommand(1);

  Common bounds_c, verify_c, bounded_c, diverge_c, converge_c, kron_c;

  auto* bounds = app.add_subcommand("bounds", "sigma_b, sigma_a and sigma_c bounds (exact for fractional rho)");
  add_common(bounds, bounds_c);
  bounds->footer("CSV columns: quantity,value,exact");

  auto* verify = app.add_subcommand("verify", "run every structural and numerical invariant");
  add_common(verify, verify_c);
  verify->footer("CSV columns: check,passed,violations,detail. Default Lmax 5.");

  double bounded_sigma = 1.0;
  std::size_t samples = 200;
  double t_range = 1e4;
  auto* bounded = app.add_subcommand("bounded", "sample |2^{-XL} P_L(sigma+it)| against the level bound");
  add_common(bounded, bounded_c);
  bounded->add_option("--sigma", bounded_sigma, "real part, > 0")->capture_default_str();
  bounded->add_option("--samples", samples, "random t per level")->capture_default_str();
  bounded->add_option("--trange", t_range, "t drawn from [0, trange)")->capture_default_str();
  bounded->footer("CSV columns: L,min_n,max_abs,bound,within_bound. Default Lmax 6.");

  double diverge_sigma = 0.2;
  auto* diverge = app.add_subcommand("diverge", "per-level sums of |a_n| n^{-sigma}");
  add_common(diverge, diverge_c);
  diverge->add_option("--sigma", diverge_sigma, "real sigma")->capture_default_str();
  diverge->footer("CSV columns: L,level_sum,cumulative,reference,ratio. Default Lmax 8.");

  std::optional<double> epsilon;
  std::size_t every = 256;
  std::string trace_out;
  auto* converge = app.add_subcommand("converge", "partial sums at s = -eps with greedy signs");
  add_common(converge, converge_c);
  converge->add_option("--epsilon", epsilon, "override eps (the parameter check still runs)");
  converge->add_option("--every", every, "trace checkpoint interval")->capture_default_str();
  converge->add_option("--trace", trace_out, "also write the trace CSV (N,re,im,abs,level,boundary) here");
  converge->footer("CSV columns: L,omega_abs,term,d,greedy_sum,boundary_re,boundary_im,tail_max. Default Lmax 8.");

  std::optional<double> K;
  std::optional<int> LK;
  std::optional<double> delta;
  double t_max = 1e7;
  std::size_t budget = 2000;
  std::string mode = "trajectory";
  auto* kron = app.add_subcommand("kronecker", "find t with a large partial sum on the imaginary axis");
  add_common(kron, kron_c);
  auto* k_opt = kron->add_option("--K", K, "target K; L_K = ceil(2^{M+1} K)");
  kron->add_option("--LK", LK, "number of levels directly")->excludes(k_opt);
  kron->add_option("--delta", delta, "tolerance for every level (default max(2^{-(2M+1)L}, 0.05))");
  kron->add_option("--tmax", t_max, "largest t scanned")->capture_default_str();
  kron->add_option("--budget", budget, "sweeps for each reference witness search")->capture_default_str();
  kron->add_option("--mode", mode, "witness mode")->check(CLI::IsMember({"fixed", "trajectory"}))->capture_default_str();
  kron->footer("CSV columns: L,witness_value,reference_value,residual_max,delta,error_budget,value_re,value_im");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*bounds) {
      const auto b = abscissa_bounds(bounds_c.params());
      emit_report(bounds_c, "bounds", b, bounds_csv(b));
      return kExitOk;
    }
    if (*verify) {
      const auto rep = run_full_verification(verify_c.params(), verify_c.levels(5), verify_c.seed);
      emit_report(verify_c, "verify", rep, verification_csv(rep));
      for (const auto& c : rep.checks)
        if (!c.passed) std::cerr << "FAILED " << c.name << ": " << c.detail << "\n";
      return rep.passed() ? kExitOk : kExitFailed;
    }
    if (*bounded) {
      const auto rep = run_boundedness_experiment(bounded_c.params(), bounded_sigma, bounded_c.levels(6), samples,
                                                  bounded_c.seed, t_range);
      emit_report(bounded_c, "bounded", rep, boundedness_csv(rep));
      std::cerr << "fitted log2 rate " << rep.fitted_rate << " (predicted " << rep.predicted_rate << ")\n";
      return rep.passed ? kExitOk : kExitFailed;
    }
    if (*diverge) {
      const auto rep = run_divergence_experiment(diverge_c.params(), diverge_sigma, diverge_c.levels(8));
      emit_report(diverge_c, "diverge", rep, divergence_csv(rep));
      std::cerr << "sigma_a lower " << rep.sigma_a_lower << ", calibrated constant " << rep.calibrated_constant
                << ", ratio spread " << rep.ratio_spread << "\n";
      return rep.passed ? kExitOk : kExitFailed;
    }
    if (*converge) {
      const auto rep = run_convergence_experiment(converge_c.params(), converge_c.levels(8), epsilon, every);
      emit_report(converge_c, "converge", rep, convergence_csv(rep));
      if (!trace_out.empty()) {
        std::ofstream f(trace_out);
        if (!f) throw InvalidParameter("cannot open " + trace_out + " for writing");
        f << trace_to_csv(rep.trace);
      }
      std::cerr << "eps " << rep.epsilon << ", decreasing from "
                << (rep.decreasing_from ? std::to_string(*rep.decreasing_from) : "none") << ", oscillation "
                << rep.oscillation_last3 << " vs 2*last term " << 2 * rep.rows.back().term << "\n";
      return rep.passed ? kExitOk : kExitFailed;
    }
    if (*kron) {
      const auto params = kron_c.params();
      DemonstrationOptions opt;
      opt.t_max = t_max;
      opt.seed = kron_c.seed;
      opt.witness_budget = budget;
      opt.mode = mode == "fixed" ? WitnessMode::fixed : WitnessMode::trajectory;
      const int levels = LK ? *LK : K ? levels_for_target(params.M, *K) : 1;
      if (delta)
        for (int L = 1; L <= levels; ++L) opt.deltas[L] = *delta;
      DemonstrationReport rep;
      int rc = kExitOk;
      try {
        rep = K ? demonstrate_large_partial_sum(params, *K, opt) : demonstrate_levels(params, levels, opt);
      } catch (const SearchExhausted& e) {
        std::cerr << e.what() << "\n";
        rep = e.best();
        rc = kExitFailed;
      }
      emit_report(kron_c, "kronecker", rep, demonstration_csv(rep));
      std::cerr << "t_K " << rep.t_K << ", |partial sum| " << std::abs(rep.partial_sum) << ", bound " << rep.bound
                << ", scanned " << rep.scanned << "\n";
      if (rc == kExitOk && std::abs(rep.partial_sum) < rep.bound) rc = kExitFailed;
      return rc;
    }
  } catch (const NonPositiveEpsilon& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "too large: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
