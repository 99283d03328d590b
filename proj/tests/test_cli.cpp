#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "adamant/adamant.hpp"
#include "adamant/commands.hpp"
#include "adamant/csv.hpp"
#include "adamant/report.hpp"
#include "adamant/simgen.hpp"
#include "test_support.hpp"

using namespace adamant;
namespace fs = std::filesystem;
using adamant::testing::random_matrix;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("adamant_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Simulated X/Y pair on disk.
void write_pair(const TempDir& dir, double sigma_a2, std::uint64_t seed) {
  SimulateConfig s;
  s.n = 30;
  s.p = 8;
  s.q = 4;
  s.effect = sigma_a2;
  s.seed = seed;
  s.out_x = (dir / "x.csv").string();
  s.out_y = (dir / "y.csv").string();
  run_simulate(s);
}

}  // namespace

TEST_CASE("load_matrix") {
  TempDir dir;
  SUBCASE("smoke") {
    write_text(dir / "m.csv", "a,b\n1,2\n3,4\n");
    const auto m = load_matrix(dir / "m.csv");
    CHECK(m.column_state() == ColumnState::raw);
    CHECK(m.values() == (Eigen::Matrix2d() << 1, 2, 3, 4).finished());
    CHECK(read_matrix_csv(dir / "m.csv").names == std::vector<std::string>{"a", "b"});
  }
  SUBCASE("NA cell is located") {
    write_text(dir / "m.csv", "a,b\n1,2\n3,NA\n");
    try {
      load_matrix(dir / "m.csv");
      FAIL("expected a parse error");
    } catch (const CsvError& e) {
      CHECK(e.row() == 3);
      CHECK(e.column() == 2);
      CHECK(std::string(e.what()).find("NA") != std::string::npos);
    }
  }
  SUBCASE("ragged rows, empty files, missing files") {
    write_text(dir / "r.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(load_matrix(dir / "r.csv"), CsvError);
    write_text(dir / "e.csv", "");
    CHECK_THROWS_AS(load_matrix(dir / "e.csv"), CsvError);
    write_text(dir / "h.csv", "a,b\n");
    CHECK_THROWS_AS(load_matrix(dir / "h.csv"), CsvError);
    CHECK_THROWS_AS(load_matrix(dir / "missing.csv"), CsvError);
  }
  SUBCASE("round trip is exact") {
    std::mt19937_64 gen(61);
    Eigen::MatrixXd v = random_matrix(7, 5, gen);
    v(0, 0) = 1e-300;
    v(1, 1) = -123456789.123456789;
    v(2, 2) = 1.0 / 3.0;
    write_matrix_csv(dir / "rt.csv", default_column_names("f", 5), v);
    CHECK(load_matrix(dir / "rt.csv").values() == v);
  }
}

TEST_CASE("epoch files round trip") {
  TempDir dir;
  std::mt19937_64 gen(62);
  std::vector<TrialEpoch> trials;
  for (int t = 0; t < 3; ++t) trials.emplace_back(random_matrix(4, 16, gen), 128.0);
  write_epoch_file(dir / "s.csv", trials);
  const auto back = read_epoch_file(dir / "s.csv", 128.0);
  REQUIRE(back.size() == 3);
  for (int t = 0; t < 3; ++t) CHECK(back[t].samples() == trials[t].samples());
}

TEST_CASE("report serialization round trips") {
  TestReport r;
  r.config.x_path = "x.csv";
  r.config.lambda_x = {"0", "100", "inf"};
  r.config.heritability_y = {0.3};
  r.config.seed = 123456789012345ULL;
  r.pairs = {{"0", "inf", 1.0 / 3.0, 0.25}, {"100", "inf", 2.5e-17, 1.0}};
  r.adaptive_p = 0.123456789;
  r.selected_pair = 1;
  r.n = 10;
  r.p = 3;
  r.q = 2;
  r.runtime_ms = 4.5;
  CHECK(parse_report(serialize_report(r)) == r);
  CHECK_THROWS(parse_report("{\"schema_version\": 99}"));
}

TEST_CASE("kernel-pair expansion") {
  TestConfig c;
  c.lambda_x = {"10", "100", "inf"};
  c.lambda_y = {"10", "100", "500", "1000", "inf"};
  const auto grid = expand_metric_pairs(c, 40, 20);
  CHECK(grid.size() == 15);
  CHECK(grid[0] == MetricPair{KernelSpec::ridge(10), KernelSpec::ridge(10)});
  CHECK(grid[14] == MetricPair{KernelSpec::linear(), KernelSpec::linear()});

  c.heritability_x = {0.5};  // p = 40 -> lambda 40
  c.lambda_y = {"inf"};
  const auto h = expand_metric_pairs(c, 40, 20);
  CHECK(h.size() == 4);
  CHECK(std::find(h.begin(), h.end(), MetricPair{KernelSpec::ridge(40), KernelSpec::linear()}) != h.end());

  c.heritability_x = {0.2};  // lambda 160
  c.lambda_x = {"160", "inf"};
  CHECK(expand_metric_pairs(c, 40, 20).size() == 2);

  c.pairs = {"0:inf", "5:10"};
  const auto explicit_pairs = expand_metric_pairs(c, 40, 20);
  REQUIRE(explicit_pairs.size() == 2);
  CHECK(explicit_pairs[0] == MetricPair{KernelSpec::projection(), KernelSpec::linear()});

  TestConfig empty;
  empty.lambda_x.clear();
  CHECK_THROWS(expand_metric_pairs(empty, 4, 4));
}

TEST_CASE("run_test") {
  TempDir dir;
  write_pair(dir, 0.5, 71);
  TestConfig c;
  c.x_path = (dir / "x.csv").string();
  c.y_path = (dir / "y.csv").string();
  c.permutations = 199;
  c.seed = 5;

  SUBCASE("single pair reduces to the Mantel test") {
    const auto r = run_test(c, 1);
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.adaptive_p == r.pairs[0].p_value);
    const auto x = center_columns(load_matrix(c.x_path));
    const auto y = center_columns(load_matrix(c.y_path));
    const auto single = single_mantel_test(gram(x, KernelSpec::linear()), gram(y, KernelSpec::linear()),
                                           PermutationPlan{199, 5, false});
    CHECK(r.pairs[0].p_value == single.p_value);
    CHECK(r.n == 30);
    CHECK(r.p == 8);
    CHECK(r.q == 4);
  }
  SUBCASE("reports are reproducible from their own config") {
    c.lambda_x = {"0", "10", "inf"};
    c.lambda_y = {"1", "inf"};
    c.output_path = (dir / "r1.json").string();
    auto a = run_test(c);
    auto again = c;
    again.output_path = (dir / "r2.json").string();
    auto b = run_test(again);
    for (const auto& pr : a.pairs) {
      const double scaled = pr.p_value * 200.0;
      CHECK(std::abs(scaled - std::round(scaled)) <= 1e-9);
    }
    auto from_disk = parse_report(read_text(dir / "r1.json"));
    CHECK(from_disk.config == c);
    auto rerun = from_disk.config;
    rerun.output_path.clear();
    const auto r3 = run_test(rerun, 3);
    CHECK(r3.pairs == a.pairs);
    CHECK(r3.adaptive_p == a.adaptive_p);
    a.runtime_ms = b.runtime_ms = 0.0;
    b.config.output_path = a.config.output_path;
    CHECK(serialize_report(a) == serialize_report(b));
  }
  SUBCASE("covariates and standardization run") {
    std::mt19937_64 gen(72);
    write_matrix_csv(dir / "c.csv", {"age"}, random_matrix(30, 1, gen));
    c.covariates_path = (dir / "c.csv").string();
    c.standardize_x = c.standardize_y = true;
    const auto r = run_test(c, 1);
    CHECK(r.adaptive_p > 0.0);
    CHECK(r.adaptive_p <= 1.0);
  }
  SUBCASE("row mismatch") {
    std::mt19937_64 gen(73);
    write_matrix_csv(dir / "short.csv", {"a"}, random_matrix(29, 1, gen));
    c.y_path = (dir / "short.csv").string();
    CHECK_THROWS(run_test(c, 1));
  }
  SUBCASE("zero permutations") {
    c.permutations = 0;
    CHECK_THROWS(run_test(c, 1));
  }
}

TEST_CASE("designs") {
  for (auto d : {Design::mvvc, Design::uni_random, Design::uni_fixed, Design::eeg_vc,
                 Design::eeg_bernoulli, Design::rotation}) {
    CHECK(parse_design(to_string(d)) == d);
  }
  CHECK_THROWS(parse_design("table2"));
}

TEST_CASE("coherence command") {
  TempDir dir;
  const fs::path epochs = dir / "epochs";
  fs::create_directories(epochs);
  std::mt19937_64 gen(81);
  for (int s = 0; s < 3; ++s) {
    std::vector<TrialEpoch> trials;
    for (int t = 0; t < 4; ++t) {
      Eigen::MatrixXd x = random_matrix(20, 256, gen);
      x.row(5) = x.row(2);  // duplicated channel
      trials.emplace_back(x, 256.0);
    }
    write_epoch_file(epochs / ("subject" + std::to_string(s) + ".csv"), trials);
  }
  CoherenceConfig c;
  c.epochs_dir = epochs.string();
  c.bands = {BandSpec::parse("theta")};
  c.output_path = (dir / "theta.csv").string();
  CHECK(run_coherence(c, 1).empty());
  const auto theta = read_matrix_csv(c.output_path);
  CHECK(theta.values.rows() == 3);
  CHECK(theta.values.cols() == 190);
  const auto it = std::find(theta.names.begin(), theta.names.end(), "ch_3:ch_6");
  REQUIRE(it != theta.names.end());
  const auto col = it - theta.names.begin();
  CHECK((theta.values.col(col).array() - 1.0).abs().maxCoeff() <= 1e-10);

  SUBCASE("band isolation") {
    CoherenceConfig both = c;
    both.bands = {BandSpec::parse("theta"), BandSpec::parse("alpha")};
    both.output_path = (dir / "both.csv").string();
    const auto outs = coherence_outputs(both);
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].filename() == "both_theta.csv");
    run_coherence(both, 2);
    CHECK(read_text(outs[0]) == read_text(c.output_path));
  }
  SUBCASE("inconsistent shapes") {
    write_epoch_file(epochs / "odd.csv", {TrialEpoch(random_matrix(19, 256, gen), 256.0)});
    CHECK_THROWS(run_coherence(c, 1));
  }
  SUBCASE("single-term bands warn") {
    const fs::path one = dir / "one";
    fs::create_directories(one);
    write_epoch_file(one / "s.csv", {TrialEpoch(random_matrix(3, 256, gen), 256.0)});
    CoherenceConfig w;
    w.epochs_dir = one.string();
    w.bands = {BandSpec::make("narrow", 4.0, 5.0)};
    w.output_path = (dir / "narrow.csv").string();
    CHECK(run_coherence(w, 1).size() == 1);
  }
}

TEST_CASE("power command") {
  TempDir dir;
  PowerConfig c;
  c.n = 20;
  c.p = 5;
  c.q = 3;
  c.effects = {0.0, 5.0};
  c.lambda_x = {"0", "inf"};
  c.lambda_y = {"inf"};
  c.replicates = 6;
  c.permutations = 49;
  c.output_path = (dir / "power.csv").string();
  const auto study = run_power(c, 2);
  CHECK(study.methods.size() == 3);
  CHECK(study.rows.size() == 6);
  CHECK(study.rejections[1].rows() == 6);
  CHECK(study.rows[3].method == "adamant");
  CHECK(study.rows[3].power == 1.0);
  const auto text = read_text(c.output_path);
  CHECK(text.rfind("effect_size,method,power,replicates,mc_standard_error\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);

  const auto again = run_power(c, 1);
  CHECK(again.rejections == study.rejections);

  c.replicates = 0;
  CHECK_THROWS(run_power(c, 1));

  const auto defaults = with_design_defaults(PowerConfig{});
  CHECK(defaults.effects == std::vector<double>{0.0, 0.01, 0.02, 0.03, 0.04});
  CHECK(defaults.lambda_x.size() * defaults.lambda_y.size() == 15);
}

TEST_CASE("simulate command") {
  TempDir dir;
  SimulateConfig s;
  s.design = Design::eeg_vc;
  s.n = 4;
  s.p = 6;
  s.q = 4;
  s.trials = 2;
  s.effect = 1.0;
  s.out_x = (dir / "snps.csv").string();
  s.epochs_dir = (dir / "eeg").string();
  run_simulate(s);
  CHECK(load_matrix(s.out_x).rows() == 4);
  CHECK(std::distance(fs::directory_iterator(s.epochs_dir), fs::directory_iterator{}) == 4);
  const auto trials = read_epoch_file(fs::directory_iterator(s.epochs_dir)->path(), 256.0);
  CHECK(trials.size() == 2);
  CHECK(trials[0].channels() == 4);

  SimulateConfig u;
  u.design = Design::uni_fixed;
  u.n = 15;
  u.p = 4;
  u.effect = 0.05;
  u.out_x = (dir / "ux.csv").string();
  u.out_y = (dir / "uy.csv").string();
  run_simulate(u);
  CHECK(load_matrix(u.out_y).cols() == 1);
  const auto first = read_text(u.out_y);
  run_simulate(u);
  CHECK(read_text(u.out_y) == first);
}
