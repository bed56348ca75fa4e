#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "coverlab/bounds.hpp"
#include "coverlab/config.hpp"
#include "coverlab/experiments.hpp"
#include "coverlab/growth.hpp"
#include "coverlab/space.hpp"

using namespace coverlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: values, comments, include defaults") {
    TempDir tmp("coverlab_cfg_test");
    {
        std::ofstream base(tmp.path / "base.cfg");
        base << "reps = 500\nlambda = 2.5\n";
    }
    {
        std::ofstream main(tmp.path / "main.cfg");
        main << "# a comment\n"
             << "experiment = growth-concentration\n"
             << "seed = 7\n"
             << "reps = 100   # inline comment\n"
             << "include base.cfg\n";
    }
    const auto cfg = ExperimentConfig::from_file((tmp.path / "main.cfg").string());
    CHECK(cfg.require_str("experiment") == "growth-concentration");
    CHECK(cfg.require_count("reps") == 100);      // existing key wins over include
    CHECK(cfg.require_num("lambda") == doctest::Approx(2.5));  // filled from include
    CHECK(cfg.get_num("v", 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(cfg.require_str("absent"), ConfigError);
    CHECK_THROWS_AS(cfg.require_count("lambda"), ConfigError);  // not an integer
}

TEST_CASE("config parsing errors carry context") {
    CHECK_THROWS_AS(ExperimentConfig::from_string("just some words\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_file("no_such_file.cfg"), ConfigError);
    const auto cfg = ExperimentConfig::from_string("experiment = pch\nseed = x\n");
    CHECK_THROWS_AS(cfg.require_u64("seed"), ConfigError);
}

TEST_CASE("schema validation") {
    auto ok = ExperimentConfig::from_string(
        "experiment = pch\nseed = 1\nspace.length = 100\n");
    validate_experiment_config(ok);
    // Unknown keys are rejected with the field path.
    auto bad = ExperimentConfig::from_string(
        "experiment = pch\nseed = 1\nspace.length = 100\nbogus_key = 3\n");
    CHECK_THROWS_WITH_AS(validate_experiment_config(bad),
                         doctest::Contains("bogus_key"), ConfigError);
    auto missing = ExperimentConfig::from_string("experiment = pch\nseed = 1\n");
    CHECK_THROWS_AS(validate_experiment_config(missing), ConfigError);
    auto unknown = ExperimentConfig::from_string("experiment = nope\nseed = 1\n");
    CHECK_THROWS_AS(validate_experiment_config(unknown), ConfigError);
    // Tolerance overrides are always accepted.
    auto tol = ExperimentConfig::from_string(
        "experiment = pch\nseed = 1\nspace.length = 100\ntol.ks_pch = 0.2\n");
    validate_experiment_config(tol);
}

TEST_CASE("list_experiments covers every kind") {
    const auto infos = list_experiments();
    CHECK(infos.size() == 8);
    bool has_pch = false;
    for (const auto& i : infos)
        if (i.name == "pch") has_pch = true;
    CHECK(has_pch);
}

TEST_CASE("growth-concentration experiment: determinism across thread counts") {
    TempDir out1("coverlab_det1"), out2("coverlab_det2");
    auto mk = [&](const fs::path& dir, int threads) {
        std::ostringstream ss;
        ss << "experiment = growth-concentration\nseed = 12345\nreps = 200\n"
           << "space = circle\nspace.length = 10\nthreads = " << threads << "\n"
           << "out_dir = " << dir.string() << "\n";
        return ExperimentConfig::from_string(ss.str());
    };
    const auto r1 = run_experiment(mk(out1.path, 1));
    const auto r8 = run_experiment(mk(out2.path, 8));
    CHECK(!r1.any_violated);
    REQUIRE(r1.csv_files.size() == r8.csv_files.size());
    for (std::size_t i = 0; i < r1.csv_files.size(); ++i)
        CHECK(slurp(r1.csv_files[i]) == slurp(r8.csv_files[i]));
    // Rerun with the identical config is byte-identical too.
    TempDir out3("coverlab_det3");
    const auto r1b = run_experiment(mk(out3.path, 1));
    for (std::size_t i = 0; i < r1.csv_files.size(); ++i)
        CHECK(slurp(r1.csv_files[i]) == slurp(r1b.csv_files[i]));
    CHECK(r1.metrics.at("ec_hat") == r8.metrics.at("ec_hat"));
}

TEST_CASE("exit contract: a violated verdict is surfaced") {
    TempDir out("coverlab_violated");
    auto cfg = ExperimentConfig::from_string(
        "experiment = segment-example\nseed = 3\nn = 50\nreps = 300\n"
        "tol.sup = 0.000001\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(r.any_violated);  // the sup distance cannot be that small
    bool found = false;
    for (const auto& rep : r.reports)
        if (rep.name == "segment-sup" && rep.verdict == Verdict::violated) found = true;
    CHECK(found);
}

TEST_CASE("segment-example passes at its real tolerances") {
    TempDir out("coverlab_segment");
    auto cfg = ExperimentConfig::from_string(
        "experiment = segment-example\nseed = 11\nn = 400\nreps = 2500\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("sup_distance") < 0.05);
    CHECK(std::abs(r.metrics.at("atom_mass") - 0.3679) < 0.03);
    CHECK(fs::exists(out.path / "summary.json"));
    CHECK(fs::exists(out.path / "cdf.csv"));
}

TEST_CASE("pch experiment end to end (small)") {
    TempDir out("coverlab_pch");
    auto cfg = ExperimentConfig::from_string(
        "experiment = pch\nseed = 21\nspace.length = 400\nreps = 150\n"
        "pch.point_reps = 2000\npch.gap_reps = 1500\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(r.metrics.count("ks_pch") == 1);
    CHECK(r.metrics.count("t0") == 1);
    CHECK(r.metrics.count("sigma") == 1);
    CHECK(r.metrics.count("gap_mean_a1") == 1);
    CHECK(fs::exists(out.path / "curve.csv"));
    CHECK(fs::exists(out.path / "gaps.csv"));
    const std::string curve = slurp(out.path / "curve.csv");
    CHECK(curve.rfind("L,t,empirical_cdf,pch_cdf,gumbel_cdf", 0) == 0);
}

TEST_CASE("subset-kappa experiment via config") {
    TempDir out("coverlab_kappa");
    auto cfg = ExperimentConfig::from_string(
        "experiment = subset-kappa\nseed = 31\nsampler = uniform-singleton\nm = 20\n"
        "outer_reps = 300\ninner_reps = 60\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("kappa_ratio") > 0.0);
    CHECK(r.metrics.at("kappa_ratio") < 10.0);
    CHECK(fs::exists(out.path / "outer.csv"));
}

TEST_CASE("subset-kappa with a metric-ball sampler from a matrix file") {
    TempDir out("coverlab_kappa_ball");
    const fs::path matrix = out.path / "line.txt";
    {
        // Six points on a line at unit spacing.
        std::ofstream m(matrix);
        m << "6\n";
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) m << std::abs(i - j) << (j == 5 ? '\n' : ' ');
        }
    }
    auto cfg = ExperimentConfig::from_string(
        "experiment = subset-kappa\nseed = 91\nsampler = metric-ball\n"
        "space.matrix_file = " +
        matrix.string() + "\nr0 = 1\nouter_reps = 200\ninner_reps = 50\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(r.metrics.at("kappa_ratio") >= 0.0);
    CHECK(r.metrics.at("kappa_ratio") < 10.0);
}

TEST_CASE("growth-concentration on a metric graph from a file") {
    TempDir out("coverlab_graph");
    const fs::path gf = out.path / "graph.txt";
    {
        std::ofstream g(gf);
        g << "3 3\n0 1 1.0\n1 2 2.0\n0 2 4.0\n";
    }
    auto cfg = ExperimentConfig::from_string(
        "experiment = growth-concentration\nseed = 92\nspace = graph\n"
        "space.graph_file = " +
        gf.string() + "\nreps = 300\nout_dir = " + out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);  // net-evaluated cover times still satisfy the bounds
    CHECK(r.metrics.at("ec_hat") > 1.0);
    CHECK(r.metrics.at("pathwise_upper_violations") == 0.0);
}

TEST_CASE("fixed-concentration via config with a finite matrix file") {
    TempDir out("coverlab_fixed");
    const fs::path matrix = out.path / "matrix.txt";
    {
        std::ofstream m(matrix);
        m << "4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n";
    }
    auto cfg = ExperimentConfig::from_string(
        "experiment = fixed-concentration\nseed = 41\nspace = finite\n"
        "space.matrix_file = " +
        matrix.string() + "\nr0 = 0.5\nreps = 400\nout_dir = " + out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("ec_hat_r0") > 4.0);  // coupon collector on 4 items
    CHECK(fs::exists(out.path / "samples.csv"));

    // eta(r0/2) = 0 configurations are rejected at the experiment level.
    auto bad = ExperimentConfig::from_string(
        "experiment = fixed-concentration\nseed = 41\nspace = circle\n"
        "space.length = 10\nmu = atoms\nmu.atoms = 0:1\nr0 = 1\nreps = 100\nout_dir = " +
        out.path.string() + "\n");
    CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("non-standardized rates flow through the general-form bounds") {
    TempDir out("coverlab_rates");
    auto cfg = ExperimentConfig::from_string(
        "experiment = growth-concentration\nseed = 94\nspace = circle\n"
        "space.length = 30\nlambda = 2\nv = 3\nreps = 500\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    // 1/lambda <= EC <= 1/lambda + diameter/v.
    CHECK(r.metrics.at("ec_hat") >= 0.5 - 0.2);
    CHECK(r.metrics.at("ec_hat") <= 0.5 + 15.0 / 3.0 + 0.2);
}

TEST_CASE("mixture seed distribution through the config surface") {
    TempDir out("coverlab_mixture");
    auto cfg = ExperimentConfig::from_string(
        "experiment = growth-concentration\nseed = 93\nspace = circle\n"
        "space.length = 20\nmu = mixture\nmu.atoms = 0:0.5,10:0.5\n"
        "mu.atom_weight = 0.4\nreps = 400\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("pathwise_upper_violations") == 0.0);
    // Mixture keeps full support, so the growth bound machinery all applies.
    CHECK(r.metrics.at("ec_hat") >= 1.0 - 3.0 * 0.2);
}

TEST_CASE("min-mu-search experiment brackets") {
    TempDir out("coverlab_minmu");
    auto cfg = ExperimentConfig::from_string(
        "experiment = min-mu-search\nseed = 51\nspace = circle\nspace.length = 20\n"
        "minmu.support = 8\nminmu.iters = 4\nreps = 120\n"
        "minmu.construction_reps = 300\nout_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("min_mu_lower") <= r.metrics.at("best_ec"));
    CHECK(r.metrics.at("sg1_pathwise_violations") == 0.0);
    // Sharper intermediate: construction mean <= r* + coupon mean + slack.
    CHECK(r.metrics.at("construction_ec") <=
          r.metrics.at("min_mu_upper_r_star") +
              coupon_mean(static_cast<std::size_t>(r.metrics.at("min_mu_upper_cov"))) +
              3.0 * r.metrics.at("construction_se"));
    CHECK(fs::exists(out.path / "weights.csv"));
    CHECK(fs::exists(out.path / "trace.csv"));
}

TEST_CASE("even-vs-uniform experiment records the growth comparison") {
    TempDir out("coverlab_even");
    auto cfg = ExperimentConfig::from_string(
        "experiment = even-vs-uniform\nseed = 61\nL = 5\nmodel = growth\nreps = 400\n"
        "out_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);  // growth case records, never gates
    CHECK(r.metrics.count("ec_even") == 1);
    CHECK(r.metrics.count("ec_uniform") == 1);
}

TEST_CASE("bounds-report emits the covering curve") {
    TempDir out("coverlab_bounds");
    auto cfg = ExperimentConfig::from_string(
        "experiment = bounds-report\nseed = 71\nspace = circle\nspace.length = 100\n"
        "out_dir = " +
        out.path.string() + "\n");
    const auto r = run_experiment(cfg);
    CHECK(!r.any_violated);
    CHECK(r.metrics.at("min_mu_lower") == doctest::Approx(100.0 / 72.0).epsilon(1e-3));
    CHECK(r.metrics.at("c_star") == doctest::Approx(8.86227).epsilon(1e-4));
    CHECK(fs::exists(out.path / "cov_curve.csv"));
}

TEST_CASE("degenerate L = 1: both arms coincide (fixed radius, r0 = 1/2)") {
    // One ball of radius 1/2 wraps the whole circumference-1 circle, so the
    // cover count is 1 under either seed law.
    const EvenVsUniformResult r =
        evenly_spaced_vs_uniform(1, /*growth=*/false, 0.5, 2000, RngStream(81));
    CHECK(r.mean_even == doctest::Approx(1.0));
    CHECK(r.mean_uniform == doctest::Approx(1.0));
}

TEST_CASE("min_mu_search sanity anchor: single-atom support on the circle") {
    // All seeds at one point: C = tau_1 + L/2 pathwise, so E C = 1 + L/2.
    const Space c = Space::circle(12.0);
    const MinMuSearchResult r =
        min_mu_search(c, {CirclePos{3.0}}, 300, 2, RngStream(82));
    CHECK(r.best_weights.size() == 1);
    CHECK(r.ec_hat == doctest::Approx(1.0 + 6.0).epsilon(0.1));
}

TEST_CASE("min_mu_search never loses to the uniform-weight baseline") {
    const Space c = Space::circle(30.0);
    std::vector<Point> support;
    for (int i = 0; i < 10; ++i) support.push_back(CirclePos{3.0 * i});
    const MinMuSearchResult r = min_mu_search(c, support, 150, 6, RngStream(83));
    // Baseline: uniform weights over the same support, fresh stream.
    GrowthParams base{1.0, 1.0,
                      SeedDistribution::atoms(support, std::vector<double>(10, 0.1)),
                      c};
    const GrowthCoverStats b = estimate_cover_stats(base, 600, RngStream(84));
    CHECK(r.ec_hat <= b.stats.mean + 3.0 * (b.stats.se_mean + r.ec_se));
}
