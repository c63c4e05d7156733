#include "doctest.h"
#include "tauomega/io.hpp"
#include "tauomega/pipeline.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

using namespace tauomega;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

const fs::path kSource = TAUOMEGA_SOURCE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tauomega_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("shipped preset files match the built-in presets") {
  for (auto name : kPresetNames) {
    const auto p = AlgorithmPreset::load(kSource / "presets" / (std::string(name) + ".preset"));
    CHECK(p.to_text() == builtin_preset(name).to_text());
  }
  const auto shipped = TauCoefficientTable::load(kSource / "config" / "tau_coefficients.txt");
  const auto defaults = TauCoefficientTable::defaults();
  REQUIRE(shipped.entries().size() == defaults.entries().size());
  for (const auto& [cover, c] : defaults.entries()) {
    CHECK(shipped.at(cover).b == c.b);
    CHECK(shipped.at(cover).vwc_c2 == c.vwc_c2);
  }
}

TEST_CASE("shipped synthetic campaign is reproducible from its seed") {
  const auto dir = scratch("regen");
  write_synthetic_campaign(dir, SyntheticOptions{});
  const auto shipped = kSource / "data" / "synthetic";
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir);
    CAPTURE(rel.string());
    CHECK(slurp(e.path()) == slurp(shipped / rel));
    ++compared;
  }
  CHECK(compared > 10);
  fs::remove_all(dir);
}

TEST_CASE("synthetic campaign: matching presets recover the generating moisture") {
  const auto dir = scratch("truth");
  auto cfg = CampaignConfig::load(kSource / "data" / "synthetic" / "config.txt");
  cfg.output_dir = dir;
  std::ostringstream log;
  const auto summary = run_pipeline(cfg, log);
  CHECK(summary.failed_sessions == 1);
  CHECK(summary.failed_retrievals == 0);

  std::istringstream truth_in(slurp(kSource / "data" / "synthetic" / "truth.csv"));
  const auto truth = io::read_csv(truth_in, "truth.csv");
  std::istringstream ret_in(slurp(dir / "retrievals.csv"));
  const auto ret = io::read_csv(ret_in, "retrievals.csv");

  std::size_t checked = 0;
  for (std::size_t i = 0; i < truth.rows.size(); ++i) {
    const auto session = truth.text(i, truth.column("session"));
    const double sm = truth.number(i, truth.column("sm"));
    for (const auto& preset : io::split(truth.text(i, truth.column("matching_presets")), ';')) {
      for (std::size_t j = 0; j < ret.rows.size(); ++j) {
        if (ret.text(j, ret.column("session")) != session || ret.text(j, ret.column("preset")) != preset)
          continue;
        CAPTURE(session);
        CAPTURE(preset);
        CHECK(std::abs(ret.number(j, ret.column("sm")) - sm) < 1e-3);
        ++checked;
      }
    }
  }
  CHECK(checked == 24);

  // The all-inverted session is reported and skipped.
  const auto sessions = slurp(dir / "sessions.csv");
  CHECK(sessions.find("grass_5,") != std::string::npos);
  CHECK(sessions.find("no valid observations") != std::string::npos);
  CHECK(slurp(dir / "retrievals.csv").find("grass_5") == std::string::npos);
  CHECK(log.str().find("PolOrderViolated") != std::string::npos);
  CHECK(fs::exists(dir / "plot_sm_grass.csv"));
  CHECK(fs::exists(dir / "plot_tb_bare.csv"));
  CHECK(fs::exists(dir / "run.log"));
  fs::remove_all(dir);
}

TEST_CASE("report rows are sorted by site, session time and preset") {
  const auto dir = scratch("order");
  auto cfg = CampaignConfig::load(kSource / "data" / "synthetic" / "config.txt");
  cfg.output_dir = dir;
  std::ostringstream log;
  run_pipeline(cfg, log);
  std::istringstream in(slurp(dir / "retrievals.csv"));
  const auto t = io::read_csv(in, "retrievals.csv");
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto key = [&](std::size_t r) {
      return std::make_tuple(t.text(r, 0), t.timestamp(r, t.column("timestamp")),
                             t.text(r, t.column("preset")));
    };
    CHECK(key(i - 1) < key(i));
  }
  fs::remove_all(dir);
}

TEST_CASE("empty session list gives empty reports and a warning") {
  const auto dir = scratch("empty");
  write(dir / "ref.csv", "timestamp,sm_1,soil_temp_k\n");
  write(dir / "config.txt", "output = out\n[site.a]\nclay_fraction = 0.2\nreference = ref.csv\n");
  const auto cfg = CampaignConfig::load(dir / "config.txt");
  std::ostringstream log;
  const auto s = run_pipeline(cfg, log);
  CHECK(s.sessions == 0);
  CHECK(log.str().find("warning") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "retrievals.csv"));
  fs::remove_all(dir);
}

TEST_CASE("config errors") {
  const auto dir = scratch("config");
  write(dir / "ref.csv", "timestamp,sm_1,soil_temp_k\n");
  write(dir / "missing.txt", "[site.a]\nclay_fraction = 0.2\nreference = nope.csv\n");
  CHECK_THROWS_AS(CampaignConfig::load(dir / "missing.txt"), DataError);
  write(dir / "preset.txt", "presets = DCA9\n");
  CHECK_THROWS_AS(CampaignConfig::load(dir / "preset.txt"), DataError);
  write(dir / "key.txt", "colour = blue\n");
  CHECK_THROWS_AS(CampaignConfig::load(dir / "key.txt"), DataError);
  write(dir / "clay.txt", "[site.a]\nclay_fraction = 2\nreference = ref.csv\n");
  CHECK_THROWS_AS(CampaignConfig::load(dir / "clay.txt"), DataError);
  write(dir / "ok.txt", "presets = DCA2,SCAV\nstatistic = mean\n[site.b]\nclay_fraction = 0.3\n"
                        "land_cover = grassland\nreference = ref.csv\n[site.a]\nclay_fraction = 0.1\n"
                        "reference = ref.csv\n");
  const auto c = CampaignConfig::load(dir / "ok.txt");
  REQUIRE(c.sites.size() == 2);
  CHECK(c.sites[0].name == "a");
  CHECK(c.sites[1].surface.h == 0.156);
  CHECK(c.presets[0].name == "DCA2");
  CHECK(c.statistic == Statistic::Mean);
  fs::remove_all(dir);
}

TEST_CASE("malformed session is fatal with file and line") {
  const auto dir = scratch("malformed");
  write(dir / "ref.csv", "timestamp,sm_1,soil_temp_k\n");
  write(dir / "s.csv", "timestamp,tb_h,tb_v\n2021-11-04T10:00:00Z,oops,230\n");
  write(dir / "config.txt", "[site.a]\nclay_fraction = 0.2\nreference = ref.csv\nsessions = s.csv\n");
  auto cfg = CampaignConfig::load(dir / "config.txt");
  std::ostringstream log;
  try {
    run_pipeline(cfg, log);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("s.csv:2") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("NDVI opacity for sites without reflectance") {
  const auto table = TauCoefficientTable::defaults();
  CHECK(*tau_sca_for("bare_soil", table, nullptr, 0) == 0);
  CHECK_FALSE(tau_sca_for("grassland", table, nullptr, 0).has_value());
  CHECK_FALSE(tau_sca_for("forest", table, nullptr, 0).has_value());
}

}
