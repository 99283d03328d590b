#include "adamant/commands.hpp"

#include "adamant/csv.hpp"
#include "adamant/parallel.hpp"
#include "adamant/rng.hpp"
#include "adamant/simgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

namespace adamant {
namespace {

std::size_t resolve_threads(std::size_t requested) {
  return requested == 0 ? configured_threads() : requested;
}

std::vector<KernelSpec> parse_grid(const std::vector<std::string>& tokens,
                                   const std::vector<double>& heritability,
                                   std::size_t features) {
  std::vector<KernelSpec> specs;
  auto add = [&](const KernelSpec& s) {
    if (std::find(specs.begin(), specs.end(), s) == specs.end()) specs.push_back(s);
  };
  for (const auto& t : tokens) add(KernelSpec::parse(t));
  if (!heritability.empty()) {
    for (double lambda : lambda_grid_from_heritability(features, heritability)) {
      add(KernelSpec::ridge(lambda));
    }
  }
  return specs;
}

DataMatrix prepare(const DataMatrix& raw, bool standardize) {
  return standardize ? standardize_columns(raw) : center_columns(raw);
}

DataMatrix with_intercept(const DataMatrix& covariates) {
  Eigen::MatrixXd c(covariates.rows(), covariates.cols() + 1);
  c.col(0).setOnes();
  c.rightCols(covariates.cols()) = covariates.values();
  return DataMatrix(std::move(c));
}

DataMatrix column(const Eigen::VectorXd& v) {
  return DataMatrix(Eigen::MatrixXd(v));
}

struct SimulatedPair {
  DataMatrix x;
  DataMatrix y;
};

EegGeneticsConfig eeg_config(Design design, std::size_t n, std::size_t p, std::size_t q,
                             double effect, std::size_t trials) {
  EegGeneticsConfig c;
  c.n = n;
  c.p = p;
  c.q = q;
  c.trials = trials;
  if (design == Design::eeg_vc) {
    c.scheme = EegGeneticsConfig::WeightScheme::vc;
    c.sigma_g2 = effect;
  } else {
    c.scheme = EegGeneticsConfig::WeightScheme::bernoulli;
    c.w_scale = effect;
  }
  return c;
}

// Theta-band coherence features for every simulated subject.
DataMatrix eeg_theta_features(const EegSimulator& sim) {
  const auto& c = sim.config();
  const std::vector<BandSpec> theta{BandSpec::parse("theta")};
  Eigen::MatrixXd y(static_cast<Eigen::Index>(c.n),
                    static_cast<Eigen::Index>(c.q * (c.q - 1) / 2));
  for (std::size_t i = 0; i < c.n; ++i) {
    y.row(static_cast<Eigen::Index>(i)) =
        subject_coherence_features(sim.subject_trials(i), theta).front().transpose();
  }
  return DataMatrix(std::move(y));
}

SimulatedPair simulate_pair(Design design, std::size_t n, std::size_t p, std::size_t q,
                            double effect, double sigma2, double rho, double theta,
                            std::size_t trials, std::uint64_t seed) {
  const std::uint64_t x_seed = mix_seed(seed, 0);
  const std::uint64_t y_seed = mix_seed(seed, 1);
  switch (design) {
    case Design::mvvc: {
      DataMatrix x = gen_design(n, p, rho, x_seed);
      MultivariateVcConfig c{n, p, q, effect, 0.1};
      DataMatrix y = gen_multivariate_vc(x, c, y_seed);
      return {std::move(x), std::move(y)};
    }
    case Design::uni_random:
    case Design::uni_fixed: {
      DataMatrix x = gen_design(n, p, rho, x_seed);
      UnivariateSimConfig c;
      c.n = n;
      c.p = p;
      c.model = design == Design::uni_fixed ? UnivariateSimConfig::Model::fixed
                                            : UnivariateSimConfig::Model::random;
      c.effect = effect;
      c.sigma2 = sigma2;
      c.design_rho = rho;
      Eigen::VectorXd y = gen_univariate(x, c, y_seed);
      return {std::move(x), column(y)};
    }
    case Design::rotation: {
      RotationDemoConfig c{n, theta, effect, sigma2};
      RotationDemo demo = gen_rotation_demo(c, seed);
      return {std::move(demo.x), column(demo.y)};
    }
    case Design::eeg_vc:
    case Design::eeg_bernoulli: {
      const auto c = eeg_config(design, n, p, q, effect, trials);
      DataMatrix x = gen_snp_groups(c, x_seed);
      EegSimulator sim(c, x, y_seed);
      return {std::move(x), eeg_theta_features(sim)};
    }
  }
  throw std::logic_error("unknown design");
}

}  // namespace

MetricPairList expand_metric_pairs(const TestConfig& config, std::size_t p,
                                   std::size_t q) {
  MetricPairList metrics;
  if (!config.pairs.empty()) {
    for (const auto& token : config.pairs) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("kernel pair must look like lx:ly, got '" + token + "'");
      }
      MetricPair pair{KernelSpec::parse(token.substr(0, colon)),
                      KernelSpec::parse(token.substr(colon + 1))};
      if (std::find(metrics.begin(), metrics.end(), pair) == metrics.end()) {
        metrics.push_back(pair);
      }
    }
    return metrics;
  }
  const auto xs = parse_grid(config.lambda_x, config.heritability_x, p);
  const auto ys = parse_grid(config.lambda_y, config.heritability_y, q);
  if (xs.empty() || ys.empty()) throw std::invalid_argument("empty penalty grid");
  return cross_product(xs, ys);
}

TestReport run_test(const TestConfig& config, std::size_t threads) {
  const auto start = std::chrono::steady_clock::now();
  if (config.permutations < 1) throw std::invalid_argument("permutations must be >= 1");
  const DataMatrix x_raw = load_matrix(config.x_path);
  const DataMatrix y_raw = load_matrix(config.y_path);
  if (x_raw.rows() != y_raw.rows()) {
    throw std::invalid_argument("dimension mismatch: X has " + std::to_string(x_raw.rows()) +
                                " rows, Y has " + std::to_string(y_raw.rows()));
  }
  DataMatrix x = prepare(x_raw, config.standardize_x);
  DataMatrix y = prepare(y_raw, config.standardize_y);
  if (!config.covariates_path.empty()) {
    const DataMatrix c = with_intercept(load_matrix(config.covariates_path));
    x = residualize(x, c);
    y = residualize(y, c);
  }
  const auto p = static_cast<std::size_t>(x.cols());
  const auto q = static_cast<std::size_t>(y.cols());
  const MetricPairList metrics = expand_metric_pairs(config, p, q);

  PermutationPlan plan{config.permutations, config.seed, false};
  AdaMantOptions options;
  options.threads = resolve_threads(threads);
  options.literal_indicator = config.literal_indicator;
  const AdaMantResult result = adamant(x, y, metrics, plan, options);

  TestReport report;
  report.config = config;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    report.pairs.push_back({metrics[m].x.token(), metrics[m].y.token(),
                            result.per_metric_stat[m], result.per_metric_p[m]});
  }
  report.adaptive_p = result.adaptive_p;
  report.selected_pair = result.selected_metric;
  report.n = static_cast<std::size_t>(x.rows());
  report.p = p;
  report.q = q;
  report.runtime_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw std::runtime_error("cannot write " + config.output_path);
    out << serialize_report(report);
    if (!out) throw std::runtime_error("failed writing " + config.output_path);
  }
  return report;
}

Design parse_design(const std::string& name) {
  if (name == "mvvc") return Design::mvvc;
  if (name == "uni-random") return Design::uni_random;
  if (name == "uni-fixed") return Design::uni_fixed;
  if (name == "eeg-vc") return Design::eeg_vc;
  if (name == "eeg-bernoulli") return Design::eeg_bernoulli;
  if (name == "rotation") return Design::rotation;
  throw std::invalid_argument("unknown design '" + name + "'");
}

std::string to_string(Design design) {
  switch (design) {
    case Design::mvvc: return "mvvc";
    case Design::uni_random: return "uni-random";
    case Design::uni_fixed: return "uni-fixed";
    case Design::eeg_vc: return "eeg-vc";
    case Design::eeg_bernoulli: return "eeg-bernoulli";
    case Design::rotation: return "rotation";
  }
  return "unknown";
}

void run_simulate(const SimulateConfig& config) {
  if (config.out_x.empty()) throw std::invalid_argument("simulate needs --out-x");
  const bool eeg = config.design == Design::eeg_vc || config.design == Design::eeg_bernoulli;
  if (eeg) {
    if (config.epochs_dir.empty() && config.out_y.empty()) {
      throw std::invalid_argument("EEG designs need --epochs-dir and/or --out-y");
    }
    const auto c = eeg_config(config.design, config.n, config.p, config.q, config.effect,
                              config.trials);
    const DataMatrix x = gen_snp_groups(c, mix_seed(config.seed, 0));
    const EegSimulator sim(c, x, mix_seed(config.seed, 1));
    write_matrix_csv(config.out_x, default_column_names("snp", c.p), x.values());
    if (!config.epochs_dir.empty()) {
      std::filesystem::create_directories(config.epochs_dir);
      for (std::size_t i = 0; i < c.n; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "subject_%05zu.csv", i + 1);
        write_epoch_file(std::filesystem::path(config.epochs_dir) / name,
                         sim.subject_trials(i));
      }
    }
    if (!config.out_y.empty()) {
      write_matrix_csv(config.out_y, upper_pair_names(c.q), eeg_theta_features(sim).values());
    }
    return;
  }
  if (config.out_y.empty()) throw std::invalid_argument("simulate needs --out-y");
  const std::size_t p = config.design == Design::rotation ? 2 : config.p;
  const SimulatedPair data =
      simulate_pair(config.design, config.n, p, config.q, config.effect, config.sigma2,
                    config.rho, config.theta, config.trials, config.seed);
  write_matrix_csv(config.out_x, default_column_names("x", static_cast<std::size_t>(data.x.cols())),
                   data.x.values());
  write_matrix_csv(config.out_y, default_column_names("y", static_cast<std::size_t>(data.y.cols())),
                   data.y.values());
}

std::vector<std::filesystem::path> coherence_outputs(const CoherenceConfig& config) {
  std::vector<std::filesystem::path> out;
  const std::filesystem::path base(config.output_path);
  for (const auto& band : config.bands) {
    if (config.bands.size() == 1) {
      out.push_back(base);
    } else {
      auto p = base;
      p.replace_filename(base.stem().string() + "_" + band.name + base.extension().string());
      out.push_back(p);
    }
  }
  return out;
}

std::vector<std::string> run_coherence(const CoherenceConfig& config, std::size_t threads) {
  if (config.bands.empty()) throw std::invalid_argument("coherence needs at least one band");
  if (config.output_path.empty()) throw std::invalid_argument("coherence needs --out");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.epochs_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::invalid_argument("no epoch files (*.csv) in " + config.epochs_dir);
  }

  std::vector<std::vector<Eigen::VectorXd>> features(files.size());
  std::vector<std::vector<std::string>> warnings(files.size());
  std::vector<Eigen::Index> channels(files.size());
  std::vector<Eigen::Index> lengths(files.size());
  parallel_for(files.size(), resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto trials = read_epoch_file(files[i], config.sample_rate_hz);
      channels[i] = trials.front().channels();
      lengths[i] = trials.front().length();
      const std::string subject = files[i].filename().string();
      features[i] = subject_coherence_features(trials, config.bands, [&](std::string_view w) {
        warnings[i].push_back(subject + ": " + std::string(w));
      });
    }
  });
  for (std::size_t i = 1; i < files.size(); ++i) {
    if (channels[i] != channels[0] || lengths[i] != lengths[0]) {
      throw std::invalid_argument("inconsistent channel count or trial length in " +
                                  files[i].string());
    }
  }

  const auto outputs = coherence_outputs(config);
  const auto names = upper_pair_names(static_cast<std::size_t>(channels[0]));
  for (std::size_t b = 0; b < config.bands.size(); ++b) {
    Eigen::MatrixXd table(static_cast<Eigen::Index>(files.size()),
                          static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < files.size(); ++i) {
      table.row(static_cast<Eigen::Index>(i)) = features[i][b].transpose();
    }
    write_matrix_csv(outputs[b], names, table);
  }
  std::vector<std::string> all;
  for (auto& w : warnings) all.insert(all.end(), w.begin(), w.end());
  return all;
}

PowerConfig with_design_defaults(PowerConfig c) {
  auto set_if_empty = [](auto& target, auto value) {
    if (target.empty()) target = value;
  };
  using Tokens = std::vector<std::string>;
  switch (c.design) {
    case Design::mvvc:
      set_if_empty(c.effects, std::vector<double>{0.0, 0.01, 0.02, 0.03, 0.04});
      set_if_empty(c.lambda_x, Tokens{"10", "100", "inf"});
      set_if_empty(c.lambda_y, Tokens{"10", "100", "500", "1000", "inf"});
      break;
    case Design::uni_random:
    case Design::uni_fixed:
      set_if_empty(c.effects, std::vector<double>{c.design == Design::uni_fixed ? 0.05
                                                                                : 0.035 * 0.035});
      set_if_empty(c.lambda_x,
                   Tokens{"100", "1000", "2500", "5000", "7500", "10000", "25000", "inf"});
      set_if_empty(c.lambda_y, Tokens{"inf"});
      break;
    case Design::eeg_vc:
      set_if_empty(c.effects, std::vector<double>{0.0, 2.5e-6, 5e-6, 7.5e-6, 1e-5});
      set_if_empty(c.lambda_x, Tokens{"10", "100", "inf"});
      set_if_empty(c.lambda_y, Tokens{"10", "100", "inf"});
      break;
    case Design::eeg_bernoulli:
      set_if_empty(c.effects, std::vector<double>{0.0, 1.0, 2.0, 4.0});
      set_if_empty(c.lambda_x, Tokens{"10", "100", "inf"});
      set_if_empty(c.lambda_y, Tokens{"10", "100", "inf"});
      break;
    case Design::rotation:
      set_if_empty(c.effects, std::vector<double>{1.0});
      set_if_empty(c.lambda_x, Tokens{"0", "10", "inf"});
      set_if_empty(c.lambda_y, Tokens{"inf"});
      break;
  }
  return c;
}

PowerStudy run_power(const PowerConfig& raw_config, std::size_t threads) {
  const PowerConfig config = with_design_defaults(raw_config);
  if (config.replicates < 1) throw std::invalid_argument("power study needs >= 1 replicate");
  if (config.permutations < 1) throw std::invalid_argument("permutations must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  const bool univariate = config.design == Design::uni_random ||
                          config.design == Design::uni_fixed ||
                          config.design == Design::rotation;
  const std::size_t p = config.design == Design::rotation ? 2 : config.p;
  const std::size_t q = univariate ? 1 : config.q;
  const std::size_t y_features =
      (config.design == Design::eeg_vc || config.design == Design::eeg_bernoulli)
          ? q * (q - 1) / 2
          : q;

  TestConfig grid;
  grid.lambda_x = config.lambda_x;
  grid.lambda_y = config.lambda_y;
  PowerStudy study;
  study.effects = config.effects;
  study.metrics = expand_metric_pairs(grid, p, y_features);
  study.methods.push_back("adamant");
  for (const auto& m : study.metrics) {
    study.methods.push_back("mantel(" + m.x.token() + "," + m.y.token() + ")");
  }
  const std::size_t methods = study.methods.size();

  AdaMantOptions options;
  options.threads = 1;
  for (std::size_t e = 0; e < config.effects.size(); ++e) {
    const double effect = config.effects[e];
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> reject(
        static_cast<Eigen::Index>(config.replicates), static_cast<Eigen::Index>(methods));
    const std::uint64_t effect_seed = mix_seed(config.seed, e);
    parallel_for(config.replicates, resolve_threads(threads), [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) {
        const SimulatedPair data = simulate_pair(
            config.design, config.n, p, q, effect, config.sigma2, config.rho, 0.0,
            config.trials, mix_seed(effect_seed, 2 * r));
        const DataMatrix x = center_columns(data.x);
        const DataMatrix y = center_columns(data.y);
        PermutationPlan plan{config.permutations, mix_seed(effect_seed, 2 * r + 1), false};
        const AdaMantResult res = adamant(x, y, study.metrics, plan, options);
        const auto row = static_cast<Eigen::Index>(r);
        reject(row, 0) = res.adaptive_p <= config.alpha;
        for (std::size_t m = 0; m < study.metrics.size(); ++m) {
          reject(row, static_cast<Eigen::Index>(m + 1)) = res.per_metric_p[m] <= config.alpha;
        }
      }
    });
    const double reps = static_cast<double>(config.replicates);
    for (std::size_t k = 0; k < methods; ++k) {
      const double power = reject.col(static_cast<Eigen::Index>(k)).cast<double>().sum() / reps;
      study.rows.push_back({effect, study.methods[k], power, config.replicates,
                            std::sqrt(power * (1.0 - power) / reps)});
    }
    study.rejections.push_back(std::move(reject));
  }
  if (!config.output_path.empty()) write_power_csv(config.output_path, study);
  return study;
}

void write_power_csv(const std::filesystem::path& path, const PowerStudy& study) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "effect_size,method,power,replicates,mc_standard_error\n";
  for (const auto& row : study.rows) {
    out << format_double(row.effect_size) << ",\"" << row.method << "\","
        << format_double(row.power) << ',' << row.replicates << ','
        << format_double(row.mc_standard_error) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace adamant
