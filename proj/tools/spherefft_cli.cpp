#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spherefft/spherefft.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int value = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      throw spherefft::ContractViolation(flag + ": cannot parse '" + item + "' as an integer");
    }
  }
  if (out.empty()) throw spherefft::ContractViolation(flag + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double value = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if (!std::isfinite(value))
        throw spherefft::ContractViolation(flag + ": value '" + item + "' is not finite");
      out.push_back(value);
    } catch (const spherefft::ContractViolation&) {
      throw;
    } catch (const std::exception&) {
      throw spherefft::ContractViolation(flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw spherefft::ContractViolation(flag + ": empty list");
  return out;
}

/// Writes through a file when a path is given, to stdout otherwise.
void write_report(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw spherefft::IoError(path + ": cannot open for writing");
  emit(os);
  if (!os) throw spherefft::IoError(path + ": write failed");
}

struct InterpolateConfig {
  std::string fn;
  std::string in_path;
  int n = 0;
  std::string out;
  std::string samples_out;
  std::string refined_out;
  int refine = 1;
  bool strict_poles = false;
};

int cmd_interpolate(const InterpolateConfig& cfg) {
  if (cfg.fn.empty() == cfg.in_path.empty())
    throw spherefft::ContractViolation("interpolate: pass exactly one of --fn and --in");

  spherefft::SphericalSamples samples;
  if (!cfg.fn.empty()) {
    if (cfg.n < 2)
      throw spherefft::ContractViolation("interpolate: --fn requires --N >= 2, got " +
                                         std::to_string(cfg.n));
    samples = spherefft::sample(spherefft::builtin(cfg.fn), cfg.n);
  } else {
    if (cfg.n != 0)
      throw spherefft::ContractViolation("interpolate: --N conflicts with --in (the file fixes N)");
    samples = spherefft::read_samples(cfg.in_path, cfg.strict_poles);
  }

  auto coeffs = spherefft::build(samples);
  std::printf("interpolant built: N = %d, %d basis coefficients\n", coeffs.n,
              2 * coeffs.n * coeffs.n - 2 * coeffs.n + 2);
  if (!cfg.out.empty()) {
    spherefft::write_coefficients_json(coeffs, cfg.out);
    std::printf("coefficients written to %s\n", cfg.out.c_str());
  }
  if (!cfg.samples_out.empty()) {
    spherefft::write_samples(samples, cfg.samples_out);
    std::printf("grid samples written to %s\n", cfg.samples_out.c_str());
  }
  if (!cfg.refined_out.empty()) {
    auto refined = spherefft::evaluate_grid(coeffs, cfg.refine);
    spherefft::write_samples(refined, cfg.refined_out);
    std::printf("refined grid (factor %d) written to %s\n", cfg.refine, cfg.refined_out.c_str());
  }
  return 0;
}

struct ConvergenceConfig {
  std::string fn;
  std::string n_list;
  int quad_theta = spherefft::NormQuadrature{}.n_theta;
  int quad_phi = spherefft::NormQuadrature{}.n_phi;
  std::string out;
  std::string format = "csv";
};

int cmd_convergence(const ConvergenceConfig& cfg) {
  auto n_values = parse_int_list(cfg.n_list, "--N");
  spherefft::NormQuadrature quad{cfg.quad_theta, cfg.quad_phi, false};
  auto records = spherefft::convergence_table(spherefft::builtin(cfg.fn), n_values, quad);
  write_report(cfg.out, [&](std::ostream& os) {
    if (cfg.format == "json")
      spherefft::write_convergence_json(records, os);
    else
      spherefft::write_convergence_csv(records, os);
  });
  return 0;
}

struct CubatureConfig {
  std::string fn;
  std::string n_list;
  std::string kappa_list;
  int ref_mult = 4;
  std::string out;
};

int cmd_cubature(const CubatureConfig& cfg) {
  auto n_values = parse_int_list(cfg.n_list, "--N");
  auto kappas = parse_double_list(cfg.kappa_list, "--kappa");
  auto table =
      spherefft::rate_table(spherefft::builtin(cfg.fn), n_values, kappas, cfg.ref_mult);
  write_report(cfg.out, [&](std::ostream& os) { spherefft::write_rate_table_csv(table, os); });
  return 0;
}

struct HypothesisConfig {
  int n_max = 256;
  std::string alphas = "0,1,2";
  std::string out;
  std::string format = "csv";
};

int cmd_verify_hypothesis(const HypothesisConfig& cfg) {
  auto alphas = parse_int_list(cfg.alphas, "--alphas");
  auto report = spherefft::verify_range(cfg.n_max, alphas);
  write_report(cfg.out, [&](std::ostream& os) {
    if (cfg.format == "json")
      spherefft::write_hypothesis_json(report, os);
    else
      spherefft::write_hypothesis_csv(report, os);
  });
  if (!report.all_pass) {
    std::fprintf(stderr, "hypothesis verification FAILED at N = %d, alpha = %d\n",
                 report.rows.back().n, report.rows.back().alpha);
    return 1;
  }
  return 0;
}

struct BenchConfig {
  std::string n_list = "256,512,1024";
  int repeats = 5;
  int threads = 0;
  std::string out;
};

int cmd_bench(const BenchConfig& cfg) {
  auto n_values = parse_int_list(cfg.n_list, "--N");
  if (cfg.repeats < 1)
    throw spherefft::ContractViolation("bench: --repeats must be >= 1, got " +
                                       std::to_string(cfg.repeats));
  if (cfg.threads > 0) spherefft::set_max_threads(cfg.threads);
  auto fn = spherefft::builtin("F1");

  std::vector<std::pair<int, double>> rows;
  for (int n : n_values) {
    auto samples = spherefft::sample(fn, n);
    spherefft::build(samples);  // warmup
    std::vector<double> times;
    for (int r = 0; r < cfg.repeats; ++r) {
      auto start = std::chrono::steady_clock::now();
      auto coeffs = spherefft::build(samples);
      auto stop = std::chrono::steady_clock::now();
      if (coeffs.n != n) throw spherefft::ContractViolation("bench: build returned wrong size");
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    rows.emplace_back(n, times[times.size() / 2]);
  }

  write_report(cfg.out, [&](std::ostream& os) {
    os << "N,build_seconds\n";
    char buf[64];
    for (const auto& [n, seconds] : rows) {
      std::snprintf(buf, sizeof(buf), "%d,%.6e", n, seconds);
      os << buf << "\n";
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spherefft: FFT-based interpolation, oscillatory cubature and norm "
      "diagnostics on the unit sphere"};
  app.require_subcommand(1);

  InterpolateConfig icfg;
  auto* interpolate = app.add_subcommand(
      "interpolate", "Build interpolant coefficients from a built-in function or sample file");
  interpolate->add_option("--fn", icfg.fn, "Built-in test function (F1..F4)");
  interpolate->add_option("--in", icfg.in_path, "Sample file (.csv text or .sph binary)");
  interpolate->add_option("--N", icfg.n, "Grid parameter when sampling a built-in function");
  interpolate->add_option("--out", icfg.out, "Coefficient JSON output path");
  interpolate->add_option("--samples-out", icfg.samples_out, "Write the sampled grid to a file");
  interpolate->add_option("--refined-out", icfg.refined_out,
                          "Evaluate on the refined grid and write the samples");
  interpolate->add_option("--refine", icfg.refine, "Refinement factor for --refined-out")
      ->check(CLI::PositiveNumber);
  interpolate->add_flag("--strict-poles", icfg.strict_poles,
                        "Reject input whose pole rows are not constant");

  ConvergenceConfig ccfg;
  auto* convergence =
      app.add_subcommand("convergence", "Interpolation error table over a list of N");
  convergence->add_option("--fn", ccfg.fn, "Built-in test function")->required();
  convergence->add_option("--N", ccfg.n_list, "Comma-separated increasing N list")->required();
  convergence->add_option("--quad-theta", ccfg.quad_theta, "Latitudinal quadrature size");
  convergence->add_option("--quad-phi", ccfg.quad_phi, "Azimuthal quadrature size");
  convergence->add_option("--out", ccfg.out, "Output path (stdout when omitted)");
  convergence->add_option("--format", ccfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CubatureConfig qcfg;
  auto* cubature =
      app.add_subcommand("cubature", "Oscillatory cubature error table over (N, kappa)");
  cubature->add_option("--fn", qcfg.fn, "Built-in test function")->required();
  cubature->add_option("--N", qcfg.n_list, "Comma-separated N list")->required();
  cubature->add_option("--kappa", qcfg.kappa_list, "Comma-separated wavenumber list")->required();
  cubature->add_option("--ref-mult", qcfg.ref_mult,
                       "Reference resolution as a multiple of max N");
  cubature->add_option("--out", qcfg.out, "Output path (stdout when omitted)");

  HypothesisConfig hcfg;
  auto* hypothesis =
      app.add_subcommand("verify-hypothesis", "Sweep the interpolation-constant bound c_H < 1");
  hypothesis->add_option("--N-max", hcfg.n_max, "Verify N = 2..N_max");
  hypothesis->add_option("--alphas", hcfg.alphas, "Comma-separated weight exponents");
  hypothesis->add_option("--out", hcfg.out, "Output path (stdout when omitted)");
  hypothesis->add_option("--format", hcfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  BenchConfig bcfg;
  auto* bench = app.add_subcommand("bench", "Time coefficient construction over a list of N");
  bench->add_option("--N", bcfg.n_list, "Comma-separated N list");
  bench->add_option("--repeats", bcfg.repeats, "Timings per N (median reported)");
  bench->add_option("--threads", bcfg.threads, "Cap worker threads (0 keeps the default)");
  bench->add_option("--out", bcfg.out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(interpolate)) return cmd_interpolate(icfg);
    if (app.got_subcommand(convergence)) return cmd_convergence(ccfg);
    if (app.got_subcommand(cubature)) return cmd_cubature(qcfg);
    if (app.got_subcommand(hypothesis)) return cmd_verify_hypothesis(hcfg);
    if (app.got_subcommand(bench)) return cmd_bench(bcfg);
  } catch (const spherefft::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const spherefft::ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
