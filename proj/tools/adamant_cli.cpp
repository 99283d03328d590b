// adamant: ridge-penalized adaptive Mantel testing from the command line.

#include "adamant/commands.hpp"
#include "adamant/csv.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (!token.empty()) out.push_back(token);
    }
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<std::string>& tokens) {
  std::vector<double> out;
  for (const auto& t : tokens) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw std::invalid_argument("not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ridge-penalized adaptive Mantel test (AdaMant)"};
  app.require_subcommand(1);

  // test
  adamant::TestConfig test;
  std::vector<std::string> lx{"inf"}, ly{"inf"}, h2x, h2y, pairs;
  auto* test_cmd = app.add_subcommand("test", "Run the adaptive Mantel test on two CSV matrices");
  test_cmd->add_option("--x", test.x_path, "Observations-by-features CSV for X")->required();
  test_cmd->add_option("--y", test.y_path, "Observations-by-features CSV for Y")->required();
  test_cmd->add_option("--lambda-x", lx, "Ridge penalties for X (0 = projection, inf = linear)")
      ->delimiter(',');
  test_cmd->add_option("--lambda-y", ly, "Ridge penalties for Y")->delimiter(',');
  test_cmd->add_option("--heritability-x", h2x, "Heritabilities mapped to X penalties")
      ->delimiter(',');
  test_cmd->add_option("--heritability-y", h2y, "Heritabilities mapped to Y penalties")
      ->delimiter(',');
  test_cmd->add_option("--pairs", pairs, "Explicit lx:ly kernel pairs")->delimiter(',');
  test_cmd->add_option("--permutations,-B", test.permutations, "Number of permutations")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--seed", test.seed, "Permutation seed");
  test_cmd->add_flag("--standardize-x", test.standardize_x);
  test_cmd->add_flag("--standardize-y", test.standardize_y);
  test_cmd->add_option("--covariates", test.covariates_path, "Covariate CSV to regress out");
  test_cmd->add_flag("--literal-indicator", test.literal_indicator,
                     "Count I(P0 <= Pb) in the final p-value");
  test_cmd->add_option("--out", test.output_path, "JSON report path")->required();

  // simulate
  adamant::SimulateConfig sim;
  std::string sim_design = "mvvc";
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a simulated data set");
  sim_cmd->add_option("--design", sim_design,
                      "mvvc | uni-random | uni-fixed | eeg-vc | eeg-bernoulli | rotation");
  sim_cmd->add_option("--n", sim.n);
  sim_cmd->add_option("--p", sim.p);
  sim_cmd->add_option("--q", sim.q);
  sim_cmd->add_option("--sigma-a2,--effect", sim.effect,
                      "Effect size (sigma_A2, sigma_b2, |beta|, sigma_g2 or W_scale)");
  sim_cmd->add_option("--sigma2", sim.sigma2);
  sim_cmd->add_option("--rho", sim.rho);
  sim_cmd->add_option("--theta", sim.theta);
  sim_cmd->add_option("--trials", sim.trials);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--out-x", sim.out_x)->required();
  sim_cmd->add_option("--out-y", sim.out_y);
  sim_cmd->add_option("--epochs-dir", sim.epochs_dir);

  // coherence
  adamant::CoherenceConfig coh;
  std::vector<std::string> bands;
  auto* coh_cmd = app.add_subcommand("coherence", "Band coherence features from epoch files");
  coh_cmd->add_option("--epochs-dir", coh.epochs_dir)->required()->check(CLI::ExistingDirectory);
  coh_cmd->add_option("--band", bands, "name:low:high or theta/alpha/beta/gamma")->required();
  coh_cmd->add_option("--sample-rate", coh.sample_rate_hz)->check(CLI::PositiveNumber);
  coh_cmd->add_option("--out", coh.output_path)->required();

  // power
  adamant::PowerConfig power;
  std::string power_design = "mvvc";
  std::vector<std::string> effects, plx, ply;
  auto* power_cmd = app.add_subcommand("power", "Monte-Carlo power study");
  power_cmd->add_option("--design", power_design);
  power_cmd->add_option("--n", power.n);
  power_cmd->add_option("--p", power.p);
  power_cmd->add_option("--q", power.q);
  power_cmd->add_option("--effects", effects, "Effect sizes")->delimiter(',');
  power_cmd->add_option("--lambda-x", plx)->delimiter(',');
  power_cmd->add_option("--lambda-y", ply)->delimiter(',');
  power_cmd->add_option("--replicates", power.replicates);
  power_cmd->add_option("--permutations,-B", power.permutations)->check(CLI::PositiveNumber);
  power_cmd->add_option("--alpha", power.alpha);
  power_cmd->add_option("--sigma2", power.sigma2);
  power_cmd->add_option("--rho", power.rho);
  power_cmd->add_option("--trials", power.trials);
  power_cmd->add_option("--seed", power.seed);
  power_cmd->add_option("--out", power.output_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (test_cmd->parsed()) {
      test.lambda_x = split_commas(lx);
      test.lambda_y = split_commas(ly);
      test.heritability_x = to_doubles(split_commas(h2x));
      test.heritability_y = to_doubles(split_commas(h2y));
      test.pairs = split_commas(pairs);
      const auto report = adamant::run_test(test);
      std::cerr << "adaptive p = " << adamant::format_double(report.adaptive_p) << " ("
                << report.pairs.size() << " kernel pairs, B = " << test.permutations << ")\n";
    } else if (sim_cmd->parsed()) {
      sim.design = adamant::parse_design(sim_design);
      adamant::run_simulate(sim);
    } else if (coh_cmd->parsed()) {
      for (const auto& b : bands) coh.bands.push_back(adamant::BandSpec::parse(b));
      for (const auto& w : adamant::run_coherence(coh)) std::cerr << "warning: " << w << '\n';
    } else if (power_cmd->parsed()) {
      power.design = adamant::parse_design(power_design);
      power.effects = to_doubles(split_commas(effects));
      power.lambda_x = split_commas(plx);
      power.lambda_y = split_commas(ply);
      adamant::run_power(power);
    }
  } catch (const std::exception& e) {
    std::cerr << "adamant: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
