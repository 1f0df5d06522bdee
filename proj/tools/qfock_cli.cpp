// Command-line driver: batch suite execution plus small single-purpose
// dumps (Gram matrices, particle-number spectra, one decay experiment, and
// a quick relations check). Exit code 0 iff everything examined passed,
// 1 on mathematical failure, 2 on usage/config errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfock/asymptotic.hpp"
#include "qfock/builders.hpp"
#include "qfock/config.hpp"
#include "qfock/errors.hpp"
#include "qfock/gram.hpp"
#include "qfock/serialize.hpp"
#include "qfock/suites.hpp"

namespace {

namespace fs = std::filesystem;

struct SharedFlags {
  int n = 2;
  double q = 0.5;
  int levels = 6;
  std::string out = "out";
};

void add_shared(CLI::App* cmd, SharedFlags& flags, bool with_out = true) {
  cmd->add_option("--n", flags.n, "Alphabet size");
  cmd->add_option("--q", flags.q, "Deformation parameter, |q| < 1");
  cmd->add_option("--levels", flags.levels, "Truncation level N");
  if (with_out) cmd->add_option("--out", flags.out, "Output directory");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw qfock::ConfigError("cannot create output directory '" + dir +
                             "': " + ec.message());
  }
}

int do_gram(const SharedFlags& flags) {
  const qfock::FockContext ctx(flags.n, flags.q, flags.levels);
  const auto family = qfock::build_gram_family<double>(ctx);
  ensure_dir(flags.out);
  nlohmann::json summary;
  summary["n"] = ctx.n;
  summary["q"] = ctx.q;
  summary["levels"] = ctx.N;
  nlohmann::json per_level = nlohmann::json::array();
  for (int k = 0; k <= ctx.N; ++k) {
    const std::string name = "gram_level_" + std::to_string(k) + ".csv";
    qfock::write_text_file((fs::path(flags.out) / name).string(),
                           qfock::matrix_csv(family.G[k]));
    nlohmann::json row;
    row["level"] = k;
    row["dimension"] = ctx.dim(k);
    row["min_eigenvalue"] = family.min_eig[k];
    row["max_eigenvalue"] = family.max_eig[k];
    row["file"] = name;
    per_level.push_back(row);
    std::cout << "level " << k << ": dim " << ctx.dim(k) << ", eigenvalues in ["
              << family.min_eig[k] << ", " << family.max_eig[k] << "]\n";
  }
  summary["levels_detail"] = per_level;
  summary["condition_warnings"] = family.condition_warnings;
  qfock::write_text_file((fs::path(flags.out) / "gram_summary.json").string(),
                         summary.dump(2) + "\n");
  std::cout << "wrote " << (ctx.N + 1) << " matrices + gram_summary.json to "
            << flags.out << "\n";
  return 0;
}

int do_spectrum(const SharedFlags& flags) {
  const qfock::FockContext ctx(flags.n, flags.q, flags.levels);
  const auto gram = qfock::build_gram_family<double>(ctx);
  const auto rho =
      qfock::build_particle_number<double>(ctx, gram, qfock::Side::Left);
  ensure_dir(flags.out);
  std::string csv = "level,eigenvalue\n";
  double min_positive = std::numeric_limits<double>::infinity();
  csv += "0,0\n";  // the vacuum level: exact zero
  for (int m = 1; m <= ctx.N; ++m) {
    qfock::DenseMatrix<double> ortho =
        gram.G_half[m] * rho.block(m, m) * gram.G_half_inv[m];
    ortho = ((ortho + ortho.transpose()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<qfock::DenseMatrix<double>> eig(
        ortho, Eigen::EigenvaluesOnly);
    for (long t = 0; t < eig.eigenvalues().size(); ++t) {
      const double value = eig.eigenvalues()(t);
      csv += std::to_string(m) + "," + std::to_string(value) + "\n";
      min_positive = std::min(min_positive, value);
    }
  }
  qfock::write_text_file((fs::path(flags.out) / "spectrum_rhoL.csv").string(),
                         csv);
  std::cout << "rho_L spectrum over levels 1.." << ctx.N
            << ": min eigenvalue " << min_positive << "\n"
            << "wrote spectrum_rhoL.csv to " << flags.out << "\n";
  return 0;
}

int do_decay(const SharedFlags& flags, int k_max, int i, int j) {
  const qfock::FockContext ctx(flags.n, flags.q, flags.levels);
  const auto gram = qfock::build_gram_family<double>(ctx);
  const auto series =
      qfock::measure_commutator_decay(ctx, gram, i, j, k_max);
  ensure_dir(flags.out);
  qfock::write_text_file(
      (fs::path(flags.out) / (series.name + ".csv")).string(),
      qfock::series_csv(series));
  qfock::write_text_file(
      (fs::path(flags.out) / (series.name + ".json")).string(),
      qfock::to_json(series).dump(2) + "\n");
  for (const auto& [k, value] : series.values) {
    std::cout << "k = " << k << ": " << value << "\n";
  }
  std::cout << "fit rate " << series.fit_rate << " (quality "
            << series.fit_quality << "), window " << series.window << "\n"
            << (series.pass ? "PASS" : "FAIL") << "\n";
  return series.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Truncated q-deformed Fock space toolkit: graded operators, exact "
      "identities, and decay experiments"};
  app.require_subcommand(1);

  // run: config-driven batch execution.
  auto* run_cmd =
      app.add_subcommand("run", "Execute configured suites and write reports");
  std::string config_path;
  SharedFlags run_flags;
  std::vector<double> q_values;
  std::vector<std::string> suites;
  int k_max = 2, trials = 200;
  std::uint64_t seed = 42;
  double tol_exact = 1e-10, tol_spectral = 1e-6;
  auto* opt_config =
      run_cmd->add_option("--config", config_path, "Flat key = value config file");
  auto* opt_n = run_cmd->add_option("--n", run_flags.n, "Alphabet size");
  auto* opt_q = run_cmd->add_option("--q", q_values, "q values")->delimiter(',');
  auto* opt_levels =
      run_cmd->add_option("--levels", run_flags.levels, "Truncation level N");
  auto* opt_suites =
      run_cmd->add_option("--suites", suites, "Suites to run")->delimiter(',');
  auto* opt_kmax = run_cmd->add_option("--k-max", k_max, "Deepest sweep index");
  auto* opt_trials =
      run_cmd->add_option("--trials", trials, "Randomized property-test trials");
  auto* opt_seed = run_cmd->add_option("--seed", seed, "RNG seed");
  auto* opt_out = run_cmd->add_option("--out", run_flags.out, "Output directory");
  auto* opt_te =
      run_cmd->add_option("--tol-exact", tol_exact, "Exact-identity tolerance");
  auto* opt_ts = run_cmd->add_option("--tol-spectral", tol_spectral,
                                     "Spectral-gap tolerance");

  // verify: quick relations check, no files.
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the relations suite and print a table");
  SharedFlags verify_flags;
  add_shared(verify_cmd, verify_flags, /*with_out=*/false);

  // gram: dump Gram matrices.
  auto* gram_cmd = app.add_subcommand("gram", "Dump Gram matrices as CSV");
  SharedFlags gram_flags;
  add_shared(gram_cmd, gram_flags);

  // spectrum: dump the particle-number spectrum.
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "Dump the rho_L eigenvalues per level");
  SharedFlags spectrum_flags;
  add_shared(spectrum_cmd, spectrum_flags);

  // decay: one commutator-decay experiment.
  auto* decay_cmd =
      app.add_subcommand("decay", "Run one commutator-decay experiment");
  SharedFlags decay_flags;
  int decay_kmax = 2, decay_i = 1, decay_j = 1;
  add_shared(decay_cmd, decay_flags);
  decay_cmd->add_option("--k-max", decay_kmax, "Deepest middle-reversal index");
  decay_cmd->add_option("--i", decay_i, "First generator letter");
  decay_cmd->add_option("--j", decay_j, "Second generator letter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      qfock::RunConfig config;
      if (opt_config->count()) config = qfock::parse_config_file(config_path);
      if (opt_n->count()) config.n = run_flags.n;
      if (opt_q->count()) config.q_list = q_values;
      if (opt_levels->count()) config.N = run_flags.levels;
      if (opt_suites->count()) config.suites = suites;
      if (opt_kmax->count()) config.k_max = k_max;
      if (opt_trials->count()) config.trials = trials;
      if (opt_seed->count()) config.seed = seed;
      if (opt_out->count()) config.output_dir = run_flags.out;
      if (opt_te->count()) config.tol_exact = tol_exact;
      if (opt_ts->count()) config.tol_spectral = tol_spectral;
      const auto manifest = qfock::run(config);
      std::cout << qfock::print_summary(manifest);
      std::cout << "manifest: "
                << (fs::path(config.output_dir) / "manifest.json").string()
                << "\n";
      return manifest.overall_pass ? 0 : 1;
    }
    if (verify_cmd->parsed()) {
      qfock::RunConfig config;
      config.n = verify_flags.n;
      config.q_list = {verify_flags.q};
      config.N = verify_flags.levels;
      config.suites = {"relations"};
      qfock::validate_config(config);
      qfock::RunManifest manifest;
      manifest.config = config;
      auto result = qfock::execute_suite("relations", config, verify_flags.q);
      manifest.overall_pass = result.pass;
      manifest.suites.push_back(std::move(result));
      std::cout << qfock::print_summary(manifest);
      return manifest.overall_pass ? 0 : 1;
    }
    if (gram_cmd->parsed()) return do_gram(gram_flags);
    if (spectrum_cmd->parsed()) return do_spectrum(spectrum_flags);
    if (decay_cmd->parsed())
      return do_decay(decay_flags, decay_kmax, decay_i, decay_j);
  } catch (const qfock::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const qfock::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
