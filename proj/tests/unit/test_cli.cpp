#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support/support.hpp"
#include "topofeat/config.hpp"
#include "topofeat/format.hpp"

using namespace topofeat;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("extract writes csv and manifest, reruns are byte-identical") {
  support::TempDir dir;
  support::write_fixture_dataset(dir / "data");
  const auto out1 = (dir / "a.csv").string(), out2 = (dir / "b.csv").string();
  REQUIRE(run({"extract", (dir / "data").string(), "--out", out1}).code == cli::kOk);
  REQUIRE(run({"extract", (dir / "data").string(), "--out", out2, "--workers", "3"}).code == cli::kOk);
  const std::string csv = support::read_file(out1);
  CHECK(csv == support::read_file(out2));
  const auto rows = lines(csv);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0].rfind("ch0.height.up_le0p25.H0.heat,", 0) == 0);
  CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "blobs");
  CHECK(rows[6].substr(rows[6].rfind(',') + 1) == "stripes");

  const auto manifest = nlohmann::json::parse(support::read_file(out1 + ".manifest.json"));
  CHECK(manifest["input_count"] == 6);
  CHECK(manifest["failure_count"] == 0);
  CHECK(manifest["config_hash"] == config_hash(PipelineConfig{}));
  CHECK(manifest["tool_version"] == "0.1.0");
  CHECK(manifest["wall_time_seconds"].get<double>() >= 0.0);
}

TEST_CASE("extract binary format") {
  support::TempDir dir;
  support::write_fixture_dataset(dir / "data");
  const auto out = (dir / "f.bin").string();
  REQUIRE(run({"extract", (dir / "data").string(), "--out", out, "--format", "bin"}).code == cli::kOk);
  CHECK(support::read_file(out).rfind("TFCOL001", 0) == 0);
}

TEST_CASE("extract usage errors exit 2 without output") {
  support::TempDir dir;
  support::write_fixture_dataset(dir / "data");
  const auto out = (dir / "x.csv").string();
  CHECK(run({"extract", (dir / "missing").string(), "--out", out}).code == cli::kUsageError);
  CHECK(run({"extract", (dir / "data").string(), "--config", (dir / "nope.yaml").string(), "--out", out})
            .code == cli::kUsageError);
  std::ofstream(dir / "bad.yaml") << "bogus: 1\n";
  CHECK(run({"extract", (dir / "data").string(), "--config", (dir / "bad.yaml").string(), "--out", out})
            .code == cli::kUsageError);
  std::filesystem::create_directories(dir / "empty");
  CHECK(run({"extract", (dir / "empty").string(), "--out", out}).code == cli::kUsageError);
  CHECK(run({"extract", (dir / "data").string()}).code == cli::kUsageError);
  CHECK(run({"extract", (dir / "data").string(), "--out", out, "--workers", "0"}).code == cli::kUsageError);
  CHECK_FALSE(std::filesystem::exists(out));
  CHECK_FALSE(std::filesystem::exists(out + ".manifest.json"));
  CHECK(run({"frobnicate"}).code == cli::kUsageError);
  CHECK(run({}).code == cli::kUsageError);
}

TEST_CASE("extract with a corrupt image exits 1") {
  support::TempDir dir;
  support::write_fixture_dataset(dir / "data");
  std::ofstream(dir.path() / "data" / "blobs" / "zz.png") << "corrupt";
  const auto out = (dir / "x.csv").string();
  CHECK(run({"extract", (dir / "data").string(), "--out", out}).code == cli::kPartialFailure);
  CHECK_FALSE(std::filesystem::exists(out));
  const auto manifest = nlohmann::json::parse(support::read_file(out + ".manifest.json"));
  CHECK(manifest["failure_count"] == 1);
  CHECK(manifest["failures"][0]["path"].get<std::string>().find("zz.png") != std::string::npos);

  CHECK(run({"extract", (dir / "data").string(), "--out", out, "--keep-partial"}).code == cli::kPartialFailure);
  CHECK(lines(support::read_file(out)).size() == 7);
}

TEST_CASE("stats matches class_stats") {
  support::TempDir dir;
  support::write_fixture_dataset(dir / "data");
  const Run r = run({"stats", (dir / "data").string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 1 + 2 * 3);
  CHECK(rows[0] == "class,channel,mean,sd,n");

  std::vector<LabeledImage> data;
  for (const auto& item : scan_dataset(dir / "data")) data.push_back({item.label, load_image(item.path)});
  std::size_t line = 1;
  for (const auto& s : class_stats(data))
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(rows[line++] == s.label + "," + std::to_string(c) + "," + format_real(s.mean[c]) + "," +
                                format_real(s.sd[c]) + ",3");

  const auto out = (dir / "stats.csv").string();
  CHECK(run({"stats", (dir / "data").string(), "--out", out}).code == cli::kOk);
  CHECK(support::read_file(out) == r.out);
}

TEST_CASE("stats edge cases") {
  support::TempDir dir;
  std::filesystem::create_directories(dir.path() / "one" / "only");
  write_png(dir.path() / "one" / "only" / "a.png", ImageGrid(4, 4, 3, std::vector<double>(48, 0.6)));
  const auto rows = lines(run({"stats", (dir / "one").string()}).out);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(rows[i].find(",0,1") != std::string::npos);
  std::filesystem::create_directories(dir / "empty");
  CHECK(run({"stats", (dir / "empty").string()}).code == cli::kUsageError);
}

TEST_CASE("inspect diagram on the 1x3 raster") {
  support::TempDir dir;
  std::ofstream(dir / "line.csv") << "0,1,0.5\n";
  const Run r = run({"inspect", (dir / "line.csv").string(), "--stage", "diagram", "--native",
                     "--filtration", "grayscale.raw", "--out", (dir / "dump").string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(support::read_file(dir / "dump" / "ch0.grayscale.raw.diagram.csv") ==
        "degree,birth,death\n0,0,1\n0,0.5,1\n");
}

TEST_CASE("inspect entropy filtration of a constant image is all zeros") {
  support::TempDir dir;
  write_png(dir / "flat.png", ImageGrid(40, 40, 3, std::vector<double>(4800, 0.4)));
  const Run r = run({"inspect", (dir / "flat.png").string(), "--stage", "filtration", "--filtration",
                     "entropy.k3", "--channel", "1", "--out", (dir / "dump").string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = lines(support::read_file(dir / "dump" / "ch1.entropy.k3.filtration.csv"));
  REQUIRE(rows.size() == 32);
  std::string zeros = "0";
  for (int i = 1; i < 32; ++i) zeros += ",0";
  for (const auto& row : rows) CHECK(row == zeros);
}

TEST_CASE("inspect curve stages and errors") {
  support::TempDir dir;
  write_png(dir / "img.png", support::Rng(9).image(32, 32, 3));
  for (const char* stage : {"betti", "landscape", "heat"}) {
    const Run r = run({"inspect", (dir / "img.png").string(), "--stage", stage, "--filtration",
                       "grayscale.raw", "--channel", "0", "--out", (dir / "dump").string()});
    REQUIRE(r.code == cli::kOk);
    const auto rows = lines(support::read_file(dir / "dump" / ("ch0.grayscale.raw." + std::string(stage) + ".csv")));
    CHECK(rows.size() > 2);
  }
  CHECK(run({"inspect", (dir / "img.png").string(), "--stage", "bogus"}).code == cli::kUsageError);
  CHECK(run({"inspect", (dir / "img.png").string(), "--stage", "diagram", "--filtration", "nope.x"}).code ==
        cli::kUsageError);
  CHECK(run({"inspect", (dir / "img.png").string(), "--stage", "diagram", "--channel", "5"}).code ==
        cli::kUsageError);
  CHECK(run({"inspect", (dir / "missing.png").string(), "--stage", "diagram"}).code == cli::kUsageError);
}

TEST_CASE("config init emits the parseable defaults") {
  const Run r = run({"config", "init"});
  REQUIRE(r.code == cli::kOk);
  CHECK(parse_config(r.out) == PipelineConfig{});
  support::TempDir dir;
  CHECK(run({"config", "init", "--out", (dir / "c.yaml").string()}).code == cli::kOk);
  CHECK(load_config(dir / "c.yaml") == PipelineConfig{});
  CHECK(run({"--version"}).code == cli::kOk);
}

}
