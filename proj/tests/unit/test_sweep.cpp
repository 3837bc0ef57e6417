#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/sweep.hpp"

using namespace scramblon;
using nlohmann::json;

namespace {

const char* kSmall = R"({
  "model": {"q": 4, "v": 0.95, "N": [1000, "inf"]},
  "protocol": {"mu": [-0.05, 0.05], "encode_len": [1, 3]},
  "grid": {"t_L": {"min": 0.0, "max": 0.6, "count": 4}, "t_R": "diagonal"},
  "threads": 1
})";

std::string csv(const SweepResult& r, const SweepConfig& c) {
  std::ostringstream os;
  write_csv(r, c, os);
  return os.str();
}

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "scramblon_sweep_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("presets") {
  const auto f4 = preset("fig4");
  CHECK(f4.v == 0.95);
  CHECK(f4.q == 4);
  CHECK(f4.mus == std::vector<double>{-0.05, 0.05});
  CHECK(f4.sizes.size() == 4);
  CHECK(f4.sizes.back().is_infinite());
  CHECK(f4.diagonal);
  CHECK(preset("fig6").v == 0.1);
  CHECK(preset("fig7").encode_lens == std::vector<int>{1, 3});
  CHECK(preset("fig7").mus == std::vector<double>{-0.05});
  const auto f5 = preset("fig5");
  CHECK_FALSE(f5.diagonal);
  CHECK(f5.mus == std::vector<double>{-0.05});
  CHECK(f5.sizes.size() == 3);
  CHECK(f5.row_count() == 3u * 101u * 101u);
  for (const auto& n : preset_names()) CHECK_NOTHROW(preset(n).validate());
  CHECK_THROWS_AS(preset("fig8"), ConfigError);
}

TEST_CASE("config parsing and validation") {
  const auto cfg = parse_config(kSmall);
  CHECK(cfg.sizes.size() == 2);
  CHECK(cfg.sizes[1].is_infinite());
  CHECK(cfg.row_count() == 2u * 2u * 2u * 4u);
  CHECK(cfg.threads == 1);
  CHECK(cfg.quadrature.node_count == QuadratureSpec{}.node_count);

  auto broken = [](const std::string& edit) {
    auto j = json::parse(kSmall);
    j.merge_patch(json::parse(edit));
    return j.dump();
  };
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"extra": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"model": {"v": 1.5}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"model": {"N": [0]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"model": {"N": ["big"]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"protocol": {"encode_len": [2]}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"grid": {"t_L": {"count": 0}}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"grid": {"t_L": {"max": 0.0}}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"grid": {"t_R": "anti"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"threads": 0})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"output": {"format": "xml"}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(broken(R"({"quadrature": {"node_count": 2}})")), ConfigError);
  CHECK_NOTHROW(parse_config(broken(R"({"threads": "auto", "output": {"units": "bits"}})")));
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("config round-trips through its JSON form") {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    const auto text = config_to_json(cfg);
    CHECK(config_to_json(parse_config(text)) == text);
  }
  const auto cfg = parse_config(kSmall);
  CHECK(config_to_json(parse_config(config_to_json(cfg))) == config_to_json(cfg));
}

TEST_CASE("row order is lexicographic in N, mu, encode_len, t_L, t_R") {
  auto cfg = parse_config(kSmall);
  cfg.diagonal = false;
  cfg.t_right = {0.0, 0.2, 2};
  const auto res = run_sweep(cfg);
  REQUIRE(res.rows.size() == cfg.row_count());
  std::size_t k = 0;
  for (const auto& n : cfg.sizes)
    for (double mu : cfg.mus)
      for (int e : cfg.encode_lens)
        for (int i = 0; i < cfg.t_left.count; ++i)
          for (int j = 0; j < cfg.t_right.count; ++j, ++k) {
            const auto& r = res.rows[k];
            CHECK(r.size == n);
            CHECK(r.mu == mu);
            CHECK(r.encode_len == e);
            CHECK(r.t_left == cfg.t_left.at(i));
            CHECK(r.t_right == cfg.t_right.at(j));
          }
}

TEST_CASE("zero coupling gives no information") {
  auto cfg = parse_config(kSmall);
  cfg.mus = {0.0};
  for (const auto& r : run_sweep(cfg).rows) {
    CHECK(r.status == RowStatus::Ok);
    CHECK(std::abs(r.mutual_info) <= 1e-10);
    CHECK(std::abs(r.negativity) <= 1e-10);
  }
}

TEST_CASE("empty grid gives a header-only table") {
  auto cfg = parse_config(kSmall);
  cfg.mus.clear();
  const auto res = run_sweep(cfg);
  CHECK(res.rows.empty());
  CHECK(csv(res, cfg) == std::string(kCsvHeader) + "\n");
  std::ostringstream js;
  write_json(res, cfg, js);
  CHECK(json::parse(js.str()).empty());
}

TEST_CASE("output does not depend on the worker count") {
  auto cfg = parse_config(kSmall);
  cfg.threads = 1;
  const auto a = csv(run_sweep(cfg), cfg);
  cfg.threads = 8;
  const auto b = csv(run_sweep(cfg), cfg);
  cfg.threads = 3;
  const auto c = csv(run_sweep(cfg), cfg);
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("CSV layout") {
  const auto cfg = parse_config(kSmall);
  const auto text = csv(run_sweep(cfg), cfg);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  CHECK(line == kCsvHeader);
  int rows = 0;
  bool saw_inf = false;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 21);
    if (line.find(",inf,") != std::string::npos) saw_inf = true;
  }
  CHECK(rows == int(cfg.row_count()));
  CHECK(saw_inf);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("JSON output parses back to the emitted values") {
  const auto cfg = parse_config(kSmall);
  const auto res = run_sweep(cfg);
  std::ostringstream os;
  write_json(res, cfg, os);
  const auto doc = json::parse(os.str());
  REQUIRE(doc.size() == res.rows.size());
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    const auto& r = res.rows[k];
    const auto& j = doc[k];
    CHECK(j["t_L"].get<double>() == round12(r.t_left));
    CHECK(j["mu"].get<double>() == round12(r.mu));
    if (r.size.is_infinite()) CHECK(j["N"] == "inf");
    else CHECK(j["N"].get<double>() == r.size.value());
    CHECK(j["encode_len"] == r.encode_len);
    CHECK(j["re_I3"].get<double>() == round12(r.correlators.i3.real()));
    CHECK(j["im_I4"].get<double>() == round12(r.correlators.i4.imag()));
    CHECK(j["err_I1"].get<double>() == round12(r.correlators.err1));
    CHECK(j["rho2"].get<double>() == round12(r.rho2));
    CHECK(j["rho4"].get<double>() == round12(r.rho4));
    CHECK(j["mutual_info"].get<double>() == round12(r.mutual_info));
    CHECK(j["negativity"].get<double>() == round12(r.negativity));
    CHECK(j["status"] == status_name(r.status));
  }
}

TEST_CASE("units option scales mutual information only") {
  auto cfg = parse_config(kSmall);
  const auto res = run_sweep(cfg);
  cfg.units = InfoUnits::Bits;
  std::ostringstream os;
  write_json(res, cfg, os);
  const auto doc = json::parse(os.str());
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    CHECK(doc[k]["mutual_info"].get<double>() == round12(res.rows[k].mutual_info / std::log(2.0)));
    CHECK(doc[k]["negativity"].get<double>() == round12(res.rows[k].negativity));
  }
}

TEST_CASE("failures stay in their own rows") {
  auto cfg = parse_config(kSmall);
  const auto good = run_sweep(cfg);
  // Too coarse to converge on the finite-N rows; the N = inf rows need no quadrature.
  cfg.quadrature.node_count = 8;
  cfg.quadrature.refinement_limit = 1;
  cfg.quadrature.rel_tol = 1e-14;
  cfg.quadrature.abs_floor = 1e-300;
  const auto bad = run_sweep(cfg);
  std::size_t failed = 0;
  for (std::size_t k = 0; k < bad.rows.size(); ++k) {
    const auto& r = bad.rows[k];
    if (r.size.is_infinite()) {
      CHECK(r.status == good.rows[k].status);
      CHECK(r.mutual_info == good.rows[k].mutual_info);
      CHECK(r.correlators.i3 == good.rows[k].correlators.i3);
    } else if (r.failed()) {
      ++failed;
      CHECK(r.status == RowStatus::NoConvergence);
      CHECK(std::isnan(r.mutual_info));
    }
  }
  CHECK(failed > 0);
  CHECK(bad.failed_count() == failed);
  std::ostringstream os;
  write_json(bad, cfg, os);
  CHECK_NOTHROW((void)json::parse(os.str()));
  CHECK(csv(bad, cfg).find(",nan,") != std::string::npos);
}

TEST_CASE("non-physical rows are flagged, not fatal") {
  const auto p = ModelParams::large_q(4, 0.95, 1.0, SystemSize::finite(1000));
  const auto row = evaluate_row(p, {0.3, 0.3, -0.05, 1}, QuadratureSpec{});
  CHECK_FALSE(row.failed());
  CHECK(std::string(status_name(RowStatus::NonPhysical)) == "nonphysical");
  CHECK(std::string(status_name(RowStatus::Clamped)) == "clamped");
}

TEST_CASE("emit writes the table and the metadata sidecar") {
  const auto dir = temp_dir();
  auto cfg = parse_config(kSmall);
  cfg.path = (dir / "small.csv").string();
  const auto res = run_sweep(cfg);
  emit(res, cfg);
  std::ifstream in(cfg.path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == csv(res, cfg));

  std::ifstream meta_in(cfg.path + ".meta.json");
  REQUIRE(meta_in);
  const auto meta = json::parse(meta_in);
  CHECK(meta["version"] == SCRAMBLON_VERSION);
  CHECK(meta["rows"] == res.rows.size());
  const auto again = parse_config(meta["config"].dump());
  CHECK(config_to_json(again) == config_to_json(cfg));

  cfg.format = OutputFormat::Json;
  cfg.path = (dir / "small.json").string();
  emit(res, cfg);
  std::ifstream jin(cfg.path);
  CHECK(json::parse(jin).size() == res.rows.size());

  cfg.path = (dir / "missing" / "deeper" / "x.csv").string();
  CHECK_THROWS_AS(emit(res, cfg), IoError);
}

TEST_CASE("point report") {
  const auto p = ModelParams::large_q(4, 0.95, 1.0, SystemSize::finite(1000));
  const auto doc = json::parse(point_report(p, {0.5, 0.4, -0.05, 1}, QuadratureSpec{}));
  CHECK(doc["model"]["kappa"].get<double>() == doctest::Approx(p.kappa()));
  CHECK(doc["scramblon"].contains("lambda0"));
  CHECK(doc["correlators"]["mode"] == "finite_n");
  CHECK(doc["state"]["eigenvalues"].size() == 4);
  CHECK(doc["info"]["status"] == "ok");
  const auto inf = json::parse(point_report(p.with_size(SystemSize::infinite()), {0.5, 0.4, -0.05, 1},
                                            QuadratureSpec{}));
  CHECK(inf["model"]["N"] == "inf");
  CHECK(inf["correlators"]["mode"] == "probe_limit");
  CHECK_FALSE(inf["scramblon"].contains("lambda0"));
}
