#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mrfm/errors.hpp"
#include "mrfm/export.hpp"
#include "mrfm/schedule.hpp"

using namespace mrfm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mrfm_export_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SpinorField random_field(const GridPtr& g) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d(0.0, 1e-3);
  SpinorField f(g);
  for (auto& v : f.data()) v = {d(rng), d(rng)};
  f.data()[5] = {1e-310, -0.0};
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("snapshot file names") {
  CHECK(io::snapshot_filename(0.0) == "snapshot_0.csv");
  CHECK(io::snapshot_filename(216.0) == "snapshot_216.csv");
  CHECK(io::snapshot_filename(50.0000000001) == "snapshot_50.csv");
  CHECK(io::snapshot_filename(0.1234) == "snapshot_0.1234.csv");
  CHECK(io::snapshot_tau("dir/snapshot_0.1234.csv") == 0.1234);
  CHECK_FALSE(io::snapshot_tau("dir/timeseries.csv").has_value());
  CHECK_FALSE(io::snapshot_tau("snapshot_x.csv").has_value());
}

TEST_CASE("snapshot round trip is exact") {
  TempDir tmp;
  const auto g = make_grid(-8, 8, 64);
  const auto f = random_field(g);
  const auto path = tmp.path / "snapshot_1.csv";
  io::write_snapshot(path, f);
  const auto back = io::read_snapshot(path, g);
  CHECK(l2_distance(back, f) == 0.0);
  const auto rebuilt = io::read_snapshot(path);
  CHECK(rebuilt.size() == 64);
  CHECK(rebuilt.grid().dz() == doctest::Approx(0.25).epsilon(1e-15));
  double diff = 0.0;
  for (std::size_t i = 0; i < f.data().size(); ++i) diff += std::norm(f.data()[i] - rebuilt.data()[i]);
  CHECK(diff == 0.0);
}

TEST_CASE("malformed snapshots are reported") {
  TempDir tmp;
  const auto g = make_grid(-8, 8, 64);
  const auto path = tmp.path / "snapshot_1.csv";
  io::write_snapshot(path, random_field(g));
  const std::string text = slurp(path);

  SUBCASE("truncated mid-line") {
    std::ofstream(path) << text.substr(0, text.size() / 2);
    CHECK_THROWS_AS(io::read_snapshot(path), MalformedFileError);
    CHECK_THROWS_AS(io::read_snapshot(path, g), MalformedFileError);
  }
  SUBCASE("truncated at a line boundary") {
    const auto cut = text.rfind('\n', text.size() / 2);
    std::ofstream(path) << text.substr(0, cut + 1);
    CHECK_THROWS_AS(io::read_snapshot(path), MalformedFileError);
    CHECK_THROWS_AS(io::read_snapshot(path, g), MalformedFileError);
  }
  SUBCASE("bad header") {
    std::ofstream(path) << "z,a,b\n";
    CHECK_THROWS_AS(io::read_snapshot(path), MalformedFileError);
  }
  SUBCASE("wrong grid") {
    CHECK_THROWS_AS(io::read_snapshot(path, make_grid(-8, 8.5, 64)), MalformedFileError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(io::read_snapshot(tmp.path / "nope.csv"), MalformedFileError);
  }
}

TEST_CASE("timeseries round trip") {
  TempDir tmp;
  const auto path = tmp.path / "timeseries.csv";
  ObservableSample a;
  a.tau = 0.1;
  a.norm2 = 1.0 - 1e-13;
  a.masses = {0.5, 0.5};
  a.mean_z = -1.0 / 3.0;
  a.spins = {{0.1, 0.2, 0.3}, 1e-17};
  a.peaks = {{-20.0, 0.5, 1.0, 4}};
  ObservableSample b = a;
  b.tau = 0.2;
  b.peaks = {{-3.0, 0.3, 0.4, 10}, {25.0, 0.3, 0.6, 20}};
  CatDecomposition d;
  d.a.centroid = 25.0;
  d.b.centroid = -3.0;
  d.a.p_up2 = 0.99;
  d.b.p_up2 = 0.01;
  d.a.residual = 1e-3;
  d.b.residual = 2e-3;
  b.branches = d;
  {
    io::TimeseriesWriter w(path);
    w.append(a);
    w.append(b);
  }
  CHECK(slurp(path).substr(0, 4) == "tau,");
  const auto rows = io::read_timeseries(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].tau == 0.1);
  CHECK(rows[0].mean_z == -1.0 / 3.0);
  CHECK(rows[0].sz2 == 1e-17);
  CHECK(rows[0].n_peaks == 1);
  CHECK(rows[0].peak1_z == -20.0);
  CHECK(std::isnan(rows[0].peak2_z));
  CHECK(std::isnan(rows[0].branch_a_z));
  CHECK(rows[1].n_peaks == 2);
  CHECK(rows[1].peak2_mass == 0.6);
  CHECK(rows[1].branch_a_z == 25.0);
  CHECK(rows[1].branch_b_residual == 2e-3);

  const auto samples = io::branch_samples(rows);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].z_a == 25.0);
  std::vector<ObservableSample> both{a, b};
  CHECK(io::branch_samples(both).size() == 1);

  std::ofstream(path, std::ios::app) << "0.3,1,2";
  CHECK_THROWS_AS(io::read_timeseries(path), MalformedFileError);
}

TEST_CASE("summary of the initial state") {
  const auto f = coherent_bell_state(make_grid(-60, 60, 2048), PhysicalParams{});
  const auto s = io::summarize(f, 0.0, {}, PeakOptions{});
  REQUIRE(s.peaks.size() == 1);
  CHECK(s.peaks[0].position == doctest::Approx(-20.0).epsilon(1e-3));
  CHECK_FALSE(s.branches.has_value());
  const auto text = io::format_summary(s);
  CHECK(text.find("peaks = 1\n") != std::string::npos);
  CHECK(text.find("decomposition: unavailable") != std::string::npos);
  CHECK(text.find("ratio up2 pair u_uu/u_du: undefined") != std::string::npos);
  CHECK(text.find("phase difference: unavailable") != std::string::npos);
}
