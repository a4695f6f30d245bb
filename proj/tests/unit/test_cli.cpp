#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "critspec/cli.hpp"
#include "doctest.h"
#include "problems.hpp"
#include "support.hpp"

using namespace critspec;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = CRITSPEC_CONFIG_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("critspec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_json(const fs::path& dir, const std::string& name, const Json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(1);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json small_torus_config(const fs::path& out) {
  return Json{{"domain", "torus"},
              {"r", 1},
              {"hamiltonian", Json::array({Json{{"nu", {1, 0}}, {"amp", 0.05}}, Json{{"nu", {0, 1}}, {"amp", 0.05}}})},
              {"N", 3},
              {"search", Json{{"seed_count", 8}}},
              {"output", Json{{"dir", out.string()}}}};
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& cmd, const fs::path& config, Overrides o = {}) {
  std::ostringstream out, err;
  const int code = run_command(cmd, config.string(), o, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("config round trip on the shipped configs") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const RunConfig a = load_config(entry.path().string());
    const Json ja = config_to_json(a);
    const RunConfig b = parse_config(ja);
    CHECK(config_to_json(b).dump() == ja.dump());
  }
  CHECK(seen >= 8);
}

TEST_CASE("config round trip on random configs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> pick(0, 1000);
    const bool su2 = pick(rng) % 2;
    const int r = su2 ? 3 : 1 + pick(rng) % 3;
    const int n = su2 ? 4 : (r == 1 ? 2 : 4);
    Json terms = Json::array();
    for (int t = 0; t < 1 + pick(rng) % 3; ++t) {
      std::vector<int> nu(n, 0);
      nu[pick(rng) % n] = 1 - 2 * (pick(rng) % 2);
      Json term{{"nu", nu}, {"amp", 0.001 * pick(rng)}, {"phase", 0.001 * pick(rng)}};
      if (pick(rng) % 2) {
        if (su2)
          term["time"] = Json{{"type", "su2"}, {"k", 1}, {"a", pick(rng) % 2}, {"b", pick(rng) % 2},
                              {"part", pick(rng) % 2 ? "im" : "re"}};
        else
          term["time"] = Json{{"type", "torus"}, {"m", std::vector<int>(r, pick(rng) % 3 - 1)}, {"phase", 0.25}};
      }
      terms.push_back(term);
    }
    Json j{{"domain", su2 ? "su2" : "torus"}, {"r", r}, {"hamiltonian", terms},
           {"rng_seed", static_cast<std::uint64_t>(pick(rng))}};
    if (pick(rng) % 2) j["N"] = 1 + pick(rng) % 6;
    if (pick(rng) % 2) j["search"] = Json{{"seed_count", pick(rng)}, {"dedup_radius", 1e-5}, {"escalate", false}};
    if (pick(rng) % 2) j["module"] = module_to_json(build_module(r, su2));
    if (pick(rng) % 3 == 0) j["lattice"] = std::vector<double>{2, 0, 0, 1};
    if (j.contains("lattice") && n != 2) j.erase("lattice");
    CAPTURE(j.dump());
    const RunConfig a = parse_config(j);
    const Json ja = config_to_json(a);
    CHECK(config_to_json(parse_config(ja)).dump() == ja.dump());
  }
}

TEST_CASE("config schema errors") {
  const Json good = small_torus_config("out");
  CHECK_NOTHROW(parse_config(good));
  auto with = [&](const std::string& key, const Json& v) {
    Json j = good;
    j[key] = v;
    return j;
  };
  CHECK_THROWS_KIND(parse_config(with("colour", 1)), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("domain", "sphere")), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("N", 0)), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("N", "many")), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("search", Json{{"seed_cnt", 3}})), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("search", Json{{"grad_tol", "small"}})), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("rng_seed", -1)), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("hamiltonian", Json{{"nu", {1, 0}}})), ErrorKind::Config);
  CHECK_THROWS_KIND(parse_config(with("lattice", std::vector<double>{1, 0, 0})), ErrorKind::Config);
  Json su2 = with("domain", "su2");
  CHECK_THROWS_KIND(parse_config(su2), ErrorKind::Config);  // r = 1 given
  su2.erase("r");
  CHECK(parse_config(su2).r == 3);
  Json missing = good;
  missing.erase("hamiltonian");
  CHECK_THROWS_KIND(parse_config(missing), ErrorKind::Config);

  // nu of the wrong length is caught once the module fixes n
  const RunConfig c = parse_config(with("hamiltonian", Json::array({Json{{"nu", {1, 0, 0}}, {"amp", 0.1}}})));
  CHECK_THROWS_KIND(config_hamiltonian(c), ErrorKind::Config);
}

TEST_CASE("su2 needs a hyperkahler module") {
  const RunConfig c = load_config((kConfigs / "su2_not_hyperkahler.json").string());
  CHECK_THROWS_KIND(config_hamiltonian(c), ErrorKind::NotHyperkahler);
}

TEST_CASE("io round trips") {
  const auto M = testing::module_ptr(2);
  const CliffordModule back = module_from_json(Json::parse(module_to_json(*M).dump()));
  for (int l = 0; l < M->count(); ++l) CHECK(testing::max_abs(back.structure(l) - M->structure(l)) == 0.0);

  auto f = TorusField::zero(M, 3);
  f.mean() = testing::random_vector(4);
  f.coeffs() = testing::random_matrix(4, f.modes().size());
  const auto g = torus_field_from_json(Json::parse(field_to_json(f).dump()), M);
  CHECK(testing::max_abs(g.coeffs() - f.coeffs()) == 0.0);
  CHECK(testing::max_abs(g.mean() - f.mean()) == 0.0);

  const auto Q = testing::module_ptr(3, true);
  auto s = SU2Field::zero(Q, 3);
  s.mean() = testing::random_vector(4);
  s.coeffs() = testing::random_matrix(4, s.modes().size());
  const auto t = su2_field_from_json(Json::parse(field_to_json(s).dump()), Q);
  CHECK(testing::max_abs(t.coeffs() - s.coeffs()) == 0.0);

  const auto terms = testing::random_small(4, TimeDomain::SU2).terms();
  const auto again = terms_from_json(Json::parse(terms_to_json(terms).dump()));
  CHECK(terms_to_json(again).dump() == terms_to_json(terms).dump());
}

TEST_CASE("verify exit codes") {
  const Run ok = run("verify", kConfigs / "t2_two_cosines.json");
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("FAIL") == std::string::npos);

  const Run hk = run("verify", kConfigs / "su2_not_hyperkahler.json");
  CHECK(hk.code == kExitConfig);
  CHECK(hk.err.find("hyperkahler") != std::string::npos);

  const Run bad = run("verify", kConfigs / "corrupted_structure.json");
  CHECK(bad.code == kExitCheckFailed);
  CHECK(bad.err.find("J_1^2 = -I") != std::string::npos);

  TempDir tmp;
  CHECK(run("verify", tmp.path / "absent.json").code == kExitConfig);
  std::ofstream(tmp.path / "broken.json") << "{\"domain\": ";
  CHECK(run("verify", tmp.path / "broken.json").code == kExitConfig);
}

TEST_CASE("verify passes for r <= 3 and su2") {
  TempDir tmp;
  for (int r = 1; r <= 3; ++r) {
    Json j = small_torus_config(tmp.path);
    j["r"] = r;
    if (r > 1) j["hamiltonian"] = Json::array({Json{{"nu", {1, 0, 0, 0}}, {"amp", 0.05}}});
    CAPTURE(r);
    CHECK(run("verify", write_json(tmp.path, "v.json", j)).code == kExitOk);
  }
  CHECK(run("verify", kConfigs / "t4_su2.json").code == kExitOk);
}

TEST_CASE("solve exit codes and reports") {
  TempDir tmp;
  const Run a = run("solve", write_json(tmp.path, "a.json", small_torus_config(tmp.path / "a")));
  REQUIRE(a.code == kExitOk);
  const Json report = Json::parse(slurp(tmp.path / "a" / "report.json"));
  CHECK(report["count_report"]["found"] == 4);
  CHECK(report["count_report"]["satisfied_sb"] == true);
  CHECK(report["count_report"]["sb_asserted"] == true);
  CHECK(report["version"] == version());
  CHECK(report["N_policy"] == "fixed");
  CHECK(report.contains("timings"));
  CHECK(report["config"]["hamiltonian"].size() == 2);
  const Json points = Json::parse(slurp(tmp.path / "a" / "points.json"));
  CHECK(points["points"].size() == 4);
  for (const auto& p : points["points"]) CHECK(p["refinement"]["accepted"] == true);
  const std::string csv = slurp(tmp.path / "a" / "summary.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  Json zero = small_torus_config(tmp.path / "z");
  zero["hamiltonian"] = Json::array();
  zero["refine"] = Json{{"N_plus", 0}};
  REQUIRE(run("solve", write_json(tmp.path, "z.json", zero)).code == kExitOk);
  const Json zr = Json::parse(slurp(tmp.path / "z" / "report.json"));
  CHECK(zr["degenerate_family"] == true);
  CHECK(zr["count_report"]["all_nondegenerate"] == false);
  CHECK(zr["count_report"]["sb_asserted"] == false);

  // fixed N without a contraction certificate
  Json hot = small_torus_config(tmp.path / "h");
  hot["hamiltonian"][0]["amp"] = 1.0;
  hot["N"] = 1;
  const Run h = run("solve", write_json(tmp.path, "h.json", hot));
  CHECK(h.code == kExitContraction);
  CHECK(h.err.find("contraction") != std::string::npos);
  hot["N"] = "auto";
  hot["search"]["seed_count"] = 4;
  hot["refine"] = Json{{"N_plus", 0}};
  const Run h2 = run("solve", write_json(tmp.path, "h2.json", hot));
  CHECK(h2.code == kExitOk);
  CHECK(Json::parse(slurp(tmp.path / "h" / "report.json"))["N_policy"] == "auto (rho = 0.5)");

  CHECK(run("solve", kConfigs / "su2_not_hyperkahler.json").code == kExitConfig);
  CHECK(run("solve", kConfigs / "corrupted_structure.json").code == kExitConfig);
}

TEST_CASE("solve output is byte-stable") {
  TempDir tmp;
  const fs::path cfg = write_json(tmp.path, "a.json", small_torus_config(tmp.path / "unused"));
  Overrides one{(tmp.path / "one").string(), 11, 1};
  Overrides two{(tmp.path / "two").string(), 11, 3};
  REQUIRE(run("solve", cfg, one).code == kExitOk);
  REQUIRE(run("solve", cfg, two).code == kExitOk);
  for (const char* f : {"points.json", "summary.csv"}) {
    CAPTURE(f);
    CHECK(slurp(tmp.path / "one" / f) == slurp(tmp.path / "two" / f));
  }
  // timings, the output directory and the thread count are the only differences
  auto strip = [&](const fs::path& p) {
    Json j = Json::parse(slurp(p));
    j.erase("timings");
    j["config"]["output"].erase("dir");
    j["config"].erase("threads");
    return j.dump();
  };
  CHECK(strip(tmp.path / "one" / "report.json") == strip(tmp.path / "two" / "report.json"));

  Overrides again{(tmp.path / "three").string(), 11, 1};
  REQUIRE(run("solve", cfg, again).code == kExitOk);
  CHECK(slurp(tmp.path / "one" / "points.json") == slurp(tmp.path / "three" / "points.json"));
}

TEST_CASE("spectrum rows") {
  const auto M = testing::module_ptr(2);
  const auto rows = spectrum_rows(*M, TimeDomain::Torus, 0, 5);
  REQUIRE(!rows.empty());
  CHECK(rows.front().kernel);
  bool seen = false;
  for (const auto& row : rows) {
    if (row.k != "(3 4)") continue;
    seen = true;
    CHECK(row.inverse_norm == doctest::Approx(1.0 / (10.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(row.deviation < 1e-10);
  }
  CHECK(seen);

  const auto su2 = spectrum_rows(*testing::module_ptr(3, true), TimeDomain::SU2, 5, 5);
  REQUIRE(su2.size() == 1);
  REQUIRE(su2[0].eigenvalues.size() == 2);
  CHECK(su2[0].eigenvalues[0] == doctest::Approx(-7.0).epsilon(1e-12));
  CHECK(su2[0].eigenvalues[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(su2[0].inverse_norm == doctest::Approx(0.2).epsilon(1e-12));

  TempDir tmp;
  Json j = small_torus_config(tmp.path / "s");
  j["spectrum"] = Json{{"k_min", 0}, {"k_max", 2}};
  const Run s = run("spectrum", write_json(tmp.path, "s.json", j));
  CHECK(s.code == kExitOk);
  CHECK(s.out.find("kernel mode") != std::string::npos);
  CHECK(slurp(tmp.path / "s" / "spectrum.csv") == s.out);
}
