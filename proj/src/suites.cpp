#include "qfock/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

#include "ortho_core.hpp"
#include "qfock/asymptotic.hpp"
#include "qfock/basis.hpp"
#include "qfock/builders.hpp"
#include "qfock/errors.hpp"
#include "qfock/gauge.hpp"
#include "qfock/serialize.hpp"
#include "qfock/verify.hpp"

namespace qfock {

namespace {

FockContext context_of(const RunConfig& config, double q) {
  return FockContext(config.n, q, config.N, config.tol_exact,
                     config.tol_spectral, config.seed);
}

void run_relations(const FockContext& ctx, const GramFamily& gram,
                   SuiteResult& result) {
  result.reports.push_back(verify_qccr(ctx, gram));
  result.reports.push_back(verify_shlyakhtenko(ctx, gram));
  result.reports.push_back(verify_reverse_conjugation(ctx, gram));
  result.reports.push_back(verify_annihilation_formula(ctx, gram));
  result.reports.push_back(verify_norm_bound(ctx, gram));

  auto with_name = [&](GradedOperator x, const std::string& tag) {
    auto rep = verify_tensor_identities(ctx, gram, x);
    rep.name += "_x_" + tag;
    result.reports.push_back(std::move(rep));
  };
  with_name(build_identity<double>(ctx), "identity");
  const auto L1 = build_creation_left<double>(ctx, gram, 1);
  with_name(compose(L1, q_adjoint(L1, gram)), "L1L1dag");
  with_name(build_random_block_diagonal<double>(ctx, ctx.seed), "random");
}

void run_spectral(const FockContext& ctx, const GramFamily& gram,
                  SuiteResult& result) {
  result.reports.push_back(verify_spectral_gap(ctx, gram));
  const int m_top = std::min(3, ctx.N - 1);
  for (int m = 1; m <= m_top; ++m) {
    auto rep = verify_fixed_point_generators(ctx, gram, m);
    rep.name += "_m" + std::to_string(m);
    result.reports.push_back(std::move(rep));
  }
}

void run_gram_oracle(const FockContext& ctx, SuiteResult& result) {
  VerificationReport rep;
  rep.name = "gram_oracle_equivalence";
  rep.tolerance = 1e-12;
  rep.metadata["n"] = ctx.n;
  rep.metadata["q"] = ctx.q;
  rep.metadata["N"] = ctx.N;
  const int k_top = std::min({ctx.N, 5, K_ORACLE});
  DenseMatrix<double> recursive = DenseMatrix<double>::Ones(1, 1);
  for (int k = 0; k <= k_top; ++k) {
    if (k > 0) recursive = gram_recursive<double>(ctx, k, recursive);
    const DenseMatrix<double> brute = gram_bruteforce<double>(ctx, k);
    rep.record(k, (brute - recursive).cwiseAbs().maxCoeff());
  }
  rep.finalize();
  result.reports.push_back(std::move(rep));
}

void run_asymptotic(const FockContext& ctx, const GramFamily& gram,
                    const RunConfig& config, SuiteResult& result) {
  const int deepest = (ctx.N - 2) / 2;  // largest k with window [2k+1, N-1]
  const int k_cap = std::min(config.k_max, deepest);
  result.series.push_back(measure_commutator_decay(ctx, gram, 1, 1, k_cap));

  for (int k = 1; k <= std::min(2, deepest); ++k) {
    result.reports.push_back(build_Ak_and_verify(ctx, gram, k));
  }

  if (deepest >= 1) {
    const auto polar = polar_Uk(ctx, gram, 1);
    VerificationReport rep;
    rep.name = "polar_U1";
    rep.tolerance = ctx.tol_exact;
    rep.max_residual = polar.reconstruction_residual;
    rep.metadata["min_sv"] = polar.min_sv;
    for (const auto& [level, sv] : polar.per_level_min_sv) {
      rep.metadata["min_sv_level_" + std::to_string(level)] = sv;
    }
    rep.finalize();
    result.reports.push_back(std::move(rep));
  }

  result.series.push_back(measure_flip_defect(ctx, gram, k_cap));

  const auto L1 = build_creation_left<double>(ctx, gram, 1);
  result.series.push_back(measure_uniform_boundedness(
      ctx, gram, compose(L1, q_adjoint(L1, gram)), std::min(config.k_max, ctx.N / 2)));
}

void run_gauge(const FockContext& ctx, const GramFamily& gram,
               SuiteResult& result) {
  using LD = long double;
  const auto& frame = detail::ld_frame(ctx);
  auto iso = build_isometries<LD>(ctx, frame.gram);
  result.reports.push_back(iso.sum_identity);

  // Per-level isometry defect as a series over the input level.
  DecaySeries defect;
  defect.name = "isometry_defect_profile";
  defect.parameter = "m";
  defect.window = "[0, N-1]";
  defect.metadata["n"] = ctx.n;
  defect.metadata["q"] = ctx.q;
  defect.metadata["N"] = ctx.N;
  for (const auto& [key, value] : iso.defect_profile) {
    const int level = std::get<2>(key);
    auto it = defect.values.find(level);
    if (it == defect.values.end() || it->second < value)
      defect.values[level] = value;
  }
  apply_fit(defect);
  // At finite truncation the defect must have shrunk into the noise by the
  // top of the window: either an order of magnitude below its level-1 value
  // or below the exactness tolerance outright.
  const double first = defect.values.count(1) ? defect.values.at(1) : 0.0;
  const double top = defect.values.rbegin() != defect.values.rend()
                         ? defect.values.rbegin()->second
                         : 0.0;
  defect.pass = top <= std::max(0.1 * first, ctx.tol_exact);
  result.series.push_back(std::move(defect));

  // phi(1) = 1 - P_vac.
  const auto identity_ld = build_identity<LD>(ctx);
  const auto one_minus_p =
      subtract(identity_ld, build_vacuum_projection<LD>(ctx));
  {
    VerificationReport rep;
    rep.name = "phi_unit";
    rep.tolerance = ctx.tol_exact;
    rep.metadata["n"] = ctx.n;
    rep.metadata["q"] = ctx.q;
    rep.metadata["N"] = ctx.N;
    const auto diff =
        subtract(phi_endomorphism(identity_ld, iso), one_minus_p);
    for (const auto& [key, block] : diff.blocks()) {
      if (block.size() > 0)
        rep.record(key.second,
                   static_cast<double>(block.cwiseAbs().maxCoeff()));
    }
    rep.finalize();
    result.reports.push_back(std::move(rep));
  }

  // lambda round trip = compression by 1 - P_vac, plus lambda(P_vac) = 0.
  {
    VerificationReport rep;
    rep.name = "lambda_roundtrip";
    rep.tolerance = ctx.tol_exact;
    rep.metadata["n"] = ctx.n;
    rep.metadata["q"] = ctx.q;
    rep.metadata["N"] = ctx.N;
    const auto x = cast_operator<LD>(
        build_random_block_diagonal<double>(ctx, ctx.seed + 1));
    const auto roundtrip = lambda_inverse(lambda_map(x, iso), iso);
    const auto target = compose(compose(one_minus_p, x), one_minus_p);
    const auto diff = subtract(roundtrip, target);
    for (const auto& [key, block] : diff.blocks()) {
      if (block.size() > 0)
        rep.record(key.second,
                   static_cast<double>(block.cwiseAbs().maxCoeff()));
    }
    double vac_image = 0.0;
    for (const auto& row : lambda_map(build_vacuum_projection<LD>(ctx), iso)) {
      for (const auto& entry : row) {
        vac_image = std::max(vac_image,
                             static_cast<double>(entry.max_abs_entry()));
      }
    }
    rep.metadata["lambda_of_vacuum_projection"] = vac_image;
    rep.max_residual = std::max(rep.max_residual, vac_image);
    rep.finalize();
    result.reports.push_back(std::move(rep));
  }

  // Conditional expectation: idempotent, fixes degree-0 quadratics, kills
  // creation operators.
  {
    VerificationReport rep;
    rep.name = "conditional_expectation";
    rep.tolerance = ctx.tol_exact;
    rep.metadata["n"] = ctx.n;
    rep.metadata["q"] = ctx.q;
    rep.metadata["N"] = ctx.N;
    const auto L1 = build_creation_left<double>(ctx, gram, 1);
    const auto quad = compose(L1, q_adjoint(L1, gram));
    const auto mixed = add(quad, L1);
    double residual = max_abs_diff(conditional_expectation(mixed), quad);
    residual = std::max(residual,
                        max_abs_diff(conditional_expectation(
                                         conditional_expectation(mixed)),
                                     conditional_expectation(mixed)));
    residual =
        std::max(residual, conditional_expectation(L1).max_abs_entry());
    rep.max_residual = residual;
    rep.finalize();
    result.reports.push_back(std::move(rep));
  }

  result.reports.push_back(verify_gauge_invariance(ctx, gram, 4));

  // Telescoping recovery, only on its convergence domain.
  const auto L1 = build_creation_left<double>(ctx, gram, 1);
  const double norm_L1 = operator_norm(L1, gram, {0, ctx.N - 1});
  const double ratio = std::abs(ctx.q) * norm_L1 * norm_L1;
  if (ratio < 1.0) {
    result.series.push_back(
        telescoping_recovery(ctx, gram, std::min(2, ctx.n), 40));
  } else {
    char note[160];
    std::snprintf(note, sizeof(note),
                  "telescoping skipped: |q|*||L_1||^2 = %.6f >= 1 (outside "
                  "the series' convergence domain)",
                  ratio);
    result.notes.emplace_back(note);
  }
}

std::string sanitize_q(double q) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%+.3f", q);
  std::string out(buffer);
  for (char& c : out) {
    if (c == '+') c = 'p';
    else if (c == '-') c = 'm';
    else if (c == '.') c = '_';
  }
  return out;
}

}  // namespace

SuiteResult execute_suite(const std::string& suite, const RunConfig& config,
                          double q) {
  SuiteResult result;
  result.suite = suite;
  result.q = q;
  const auto start = std::chrono::steady_clock::now();
  try {
    const FockContext ctx = context_of(config, q);
    if (suite == "halfpower") {
      result.reports.push_back(
          verify_halfpower_inequality(config.trials, 20, config.seed));
    } else if (suite == "gram-oracle") {
      run_gram_oracle(ctx, result);
    } else {
      const GramFamily gram = build_gram_family<double>(ctx);
      if (suite == "relations") {
        run_relations(ctx, gram, result);
      } else if (suite == "spectral") {
        run_spectral(ctx, gram, result);
      } else if (suite == "asymptotic") {
        run_asymptotic(ctx, gram, config, result);
      } else if (suite == "gauge") {
        run_gauge(ctx, gram, result);
      } else {
        throw ConfigError("unknown suite '" + suite + "'");
      }
    }
  } catch (const Error& e) {
    result.error = e.what();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.pass = result.error.empty();
  for (const auto& rep : result.reports) result.pass = result.pass && rep.pass;
  for (const auto& s : result.series) result.pass = result.pass && s.pass;
  return result;
}

RunManifest run(const RunConfig& config) {
  validate_config(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw ConfigError("config: cannot create output directory '" +
                      config.output_dir + "': " + ec.message());
  }

  RunManifest manifest;
  manifest.config = config;
  nlohmann::json suites_json = nlohmann::json::array();
  for (const double q : config.q_list) {
    for (const auto& suite : config.suites) {
      SuiteResult result = execute_suite(suite, config, q);

      const std::string base = suite + "_q" + sanitize_q(q);
      nlohmann::json entry;
      entry["suite"] = result.suite;
      entry["q"] = result.q;
      entry["pass"] = result.pass;
      entry["wall_seconds"] = result.wall_seconds;
      entry["error"] = result.error;
      entry["notes"] = result.notes;
      nlohmann::json files = nlohmann::json::array();
      nlohmann::json reports = nlohmann::json::array();
      for (const auto& rep : result.reports) {
        const std::string path = base + "_" + rep.name + ".json";
        write_text_file((fs::path(config.output_dir) / path).string(),
                        to_json(rep).dump(2) + "\n");
        files.push_back(path);
        reports.push_back(to_json(rep));
      }
      nlohmann::json series = nlohmann::json::array();
      for (const auto& s : result.series) {
        const std::string csv_path = base + "_" + s.name + ".csv";
        const std::string json_path = base + "_" + s.name + ".json";
        write_text_file((fs::path(config.output_dir) / csv_path).string(),
                        series_csv(s));
        write_text_file((fs::path(config.output_dir) / json_path).string(),
                        to_json(s).dump(2) + "\n");
        files.push_back(csv_path);
        files.push_back(json_path);
        series.push_back(to_json(s));
      }
      entry["reports"] = reports;
      entry["series"] = series;
      entry["files"] = files;
      suites_json.push_back(entry);

      manifest.overall_pass = manifest.overall_pass && result.pass;
      manifest.suites.push_back(std::move(result));
    }
  }

  nlohmann::json root;
  root["config"] = to_json(config);
  root["overall_pass"] = manifest.overall_pass;
  root["suites"] = suites_json;
  write_text_file((fs::path(config.output_dir) / "manifest.json").string(),
                  root.dump(2) + "\n");
  return manifest;
}

std::string print_summary(const RunManifest& manifest) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s %14s %9s  %s\n",
                "suite", "q", "checks", "series", "worst", "wall_s", "status");
  out += line;
  for (const auto& result : manifest.suites) {
    double worst = 0.0;
    for (const auto& rep : result.reports)
      worst = std::max(worst, rep.max_residual);
    bool worst_is_rate = false;
    if (result.reports.empty() && !result.series.empty()) {
      worst = result.series.front().fit_rate;
      worst_is_rate = true;
    }
    std::snprintf(line, sizeof(line), "%-12s %+8.3f %8zu %8zu %14.3e %9.3f  %s\n",
                  result.suite.c_str(), result.q, result.reports.size(),
                  result.series.size(), worst, result.wall_seconds,
                  result.pass ? "PASS" : "FAIL");
    out += line;
    (void)worst_is_rate;
    if (!result.error.empty()) {
      out += "    error: " + result.error + "\n";
    }
    for (const auto& rep : result.reports) {
      if (!rep.pass) {
        std::snprintf(line, sizeof(line),
                      "    failed check: %s (max residual %.3e > tol %.3e)\n",
                      rep.name.c_str(), rep.max_residual, rep.tolerance);
        out += line;
      }
    }
    for (const auto& s : result.series) {
      if (!s.pass) {
        std::snprintf(line, sizeof(line),
                      "    failed series: %s (fit rate %.3f, quality %.3f)\n",
                      s.name.c_str(), s.fit_rate, s.fit_quality);
        out += line;
      }
    }
    for (const auto& note : result.notes) {
      out += "    note: " + note + "\n";
    }
  }
  out += std::string("OVERALL: ") +
         (manifest.overall_pass ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace qfock
