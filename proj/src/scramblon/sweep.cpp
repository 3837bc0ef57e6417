#include "scramblon/sweep.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/info_measures.hpp"

namespace scramblon {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      config_fail("unknown key '" + key + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) config_fail(where + "." + key + " is required");
  return *it;
}

double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) config_fail(what + " must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) config_fail(what + " must be an integer");
  return j.get<int>();
}

SystemSize parse_size(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return SystemSize::infinite();
    config_fail("model.N entries must be positive integers or \"inf\"");
  }
  if (!j.is_number()) config_fail("model.N entries must be positive integers or \"inf\"");
  try {
    return SystemSize::finite(j.get<double>());
  } catch (const ArgumentError& e) {
    config_fail(std::string("model.N: ") + e.what());
  }
}

GridRange parse_range(const json& j, const std::string& where) {
  check_keys(j, where, {"min", "max", "count"});
  GridRange r;
  r.min = get_number(require(j, "min", where), where + ".min");
  r.max = get_number(require(j, "max", where), where + ".max");
  r.count = get_int(require(j, "count", where), where + ".count");
  return r;
}

json range_json(const GridRange& r) {
  return {{"min", r.min}, {"max", r.max}, {"count", r.count}};
}

const char* rule_name(QuadratureRule r) {
  return r == QuadratureRule::GaussLaguerre ? "gauss_laguerre" : "log_trapezoid";
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_json(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt(x);
}

std::string size_text(const SystemSize& n) {
  return n.is_infinite() ? "inf" : fmt(n.value());
}

double unit_scale(InfoUnits u) { return u == InfoUnits::Bits ? 1.0 / std::log(2.0) : 1.0; }

}  // namespace

double GridRange::at(int i) const {
  if (count == 1) return min;
  return min + (max - min) * double(i) / double(count - 1);
}

void SweepConfig::validate() const {
  try {
    ModelParams::large_q(q, v, beta);
  } catch (const ArgumentError& e) {
    config_fail(std::string("model: ") + e.what());
  }
  for (double mu : mus)
    if (!std::isfinite(mu)) config_fail("protocol.mu entries must be finite");
  for (int e : encode_lens)
    if (e < 1 || e % 2 == 0)
      config_fail("protocol.encode_len entries must be positive odd integers");
  auto check_range = [](const GridRange& r, const char* name) {
    if (r.count < 1) config_fail(std::string("grid.") + name + ".count must be >= 1");
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min < 0.0 || r.max < 0.0)
      config_fail(std::string("grid.") + name + " bounds must be finite and non-negative");
    if (r.count > 1 && !(r.max > r.min))
      config_fail(std::string("grid.") + name + " needs max > min when count > 1");
  };
  check_range(t_left, "t_L");
  if (!diagonal) check_range(t_right, "t_R");
  try {
    quadrature.validate();
  } catch (const ArgumentError& e) {
    config_fail(std::string("quadrature: ") + e.what());
  }
  if (threads < 0) config_fail("threads must be a positive integer or \"auto\"");
}

std::size_t SweepConfig::row_count() const {
  const std::size_t nr = diagonal ? 1 : std::size_t(t_right.count);
  return sizes.size() * mus.size() * encode_lens.size() * std::size_t(t_left.count) * nr;
}

int SweepConfig::resolved_threads() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_fail(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, "config", {"model", "protocol", "grid", "quadrature", "output", "threads"});

  SweepConfig cfg;
  const auto& model = require(doc, "model", "config");
  check_keys(model, "model", {"q", "v", "beta", "N"});
  cfg.q = get_int(require(model, "q", "model"), "model.q");
  cfg.v = get_number(require(model, "v", "model"), "model.v");
  if (model.contains("beta")) cfg.beta = get_number(model["beta"], "model.beta");
  const auto& ns = require(model, "N", "model");
  if (!ns.is_array()) config_fail("model.N must be a list");
  for (const auto& n : ns) cfg.sizes.push_back(parse_size(n));

  const auto& proto = require(doc, "protocol", "config");
  check_keys(proto, "protocol", {"mu", "encode_len"});
  const auto& mus = require(proto, "mu", "protocol");
  if (!mus.is_array()) config_fail("protocol.mu must be a list");
  for (const auto& m : mus) cfg.mus.push_back(get_number(m, "protocol.mu"));
  if (proto.contains("encode_len")) {
    if (!proto["encode_len"].is_array()) config_fail("protocol.encode_len must be a list");
    cfg.encode_lens.clear();
    for (const auto& e : proto["encode_len"])
      cfg.encode_lens.push_back(get_int(e, "protocol.encode_len"));
  }

  const auto& grid = require(doc, "grid", "config");
  check_keys(grid, "grid", {"t_L", "t_R"});
  cfg.t_left = parse_range(require(grid, "t_L", "grid"), "grid.t_L");
  const auto& tr = require(grid, "t_R", "grid");
  if (tr.is_string()) {
    if (tr.get<std::string>() != "diagonal")
      config_fail("grid.t_R must be a range or \"diagonal\"");
    cfg.diagonal = true;
  } else {
    cfg.diagonal = false;
    cfg.t_right = parse_range(tr, "grid.t_R");
  }

  if (doc.contains("quadrature")) {
    const auto& q = doc["quadrature"];
    check_keys(q, "quadrature", {"node_count", "refinement_limit", "rel_tol", "abs_floor", "rule"});
    auto& s = cfg.quadrature;
    if (q.contains("node_count")) s.node_count = get_int(q["node_count"], "quadrature.node_count");
    if (q.contains("refinement_limit"))
      s.refinement_limit = get_int(q["refinement_limit"], "quadrature.refinement_limit");
    if (q.contains("rel_tol")) s.rel_tol = get_number(q["rel_tol"], "quadrature.rel_tol");
    if (q.contains("abs_floor")) s.abs_floor = get_number(q["abs_floor"], "quadrature.abs_floor");
    if (q.contains("rule")) {
      const auto r = q["rule"].is_string() ? q["rule"].get<std::string>() : "";
      if (r == "gauss_laguerre") s.rule = QuadratureRule::GaussLaguerre;
      else if (r == "log_trapezoid") s.rule = QuadratureRule::LogTrapezoid;
      else config_fail("quadrature.rule must be \"gauss_laguerre\" or \"log_trapezoid\"");
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    check_keys(o, "output", {"format", "path", "units"});
    if (o.contains("format")) {
      const auto f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "csv") cfg.format = OutputFormat::Csv;
      else if (f == "json") cfg.format = OutputFormat::Json;
      else config_fail("output.format must be \"csv\" or \"json\"");
    }
    if (o.contains("path")) {
      if (!o["path"].is_string()) config_fail("output.path must be a string");
      cfg.path = o["path"].get<std::string>();
    }
    if (o.contains("units")) {
      const auto u = o["units"].is_string() ? o["units"].get<std::string>() : "";
      if (u == "nats") cfg.units = InfoUnits::Nats;
      else if (u == "bits") cfg.units = InfoUnits::Bits;
      else config_fail("output.units must be \"nats\" or \"bits\"");
    }
  }

  if (doc.contains("threads")) {
    const auto& t = doc["threads"];
    if (t.is_string() && t.get<std::string>() == "auto") cfg.threads = 0;
    else if (t.is_number_integer() && t.get<int>() >= 1) cfg.threads = t.get<int>();
    else config_fail("threads must be a positive integer or \"auto\"");
  }

  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SweepConfig& cfg, int indent) {
  json ns = json::array();
  for (const auto& n : cfg.sizes) {
    if (n.is_infinite()) ns.push_back("inf");
    else ns.push_back(static_cast<long long>(n.value()));
  }
  json doc;
  doc["model"] = {{"q", cfg.q}, {"v", cfg.v}, {"beta", cfg.beta}, {"N", ns}};
  doc["protocol"] = {{"mu", cfg.mus}, {"encode_len", cfg.encode_lens}};
  doc["grid"] = {{"t_L", range_json(cfg.t_left)},
                 {"t_R", cfg.diagonal ? json("diagonal") : range_json(cfg.t_right)}};
  const auto& s = cfg.quadrature;
  doc["quadrature"] = {{"node_count", s.node_count},
                       {"refinement_limit", s.refinement_limit},
                       {"rel_tol", s.rel_tol},
                       {"abs_floor", s.abs_floor},
                       {"rule", rule_name(s.rule)}};
  doc["output"] = {{"format", cfg.format == OutputFormat::Csv ? "csv" : "json"},
                   {"path", cfg.path},
                   {"units", cfg.units == InfoUnits::Nats ? "nats" : "bits"}};
  doc["threads"] = cfg.threads == 0 ? json("auto") : json(cfg.threads);
  return doc.dump(indent);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig4", "fig5", "fig6", "fig7"};
  return names;
}

SweepConfig preset(const std::string& name) {
  SweepConfig cfg;
  cfg.q = 4;
  cfg.v = 0.95;
  cfg.mus = {-0.05, 0.05};
  cfg.encode_lens = {1};
  cfg.t_left = {0.0, 3.0, 201};
  cfg.diagonal = true;
  if (name == "fig4") {
    cfg.sizes = {SystemSize::finite(100), SystemSize::finite(1000), SystemSize::finite(2000),
                 SystemSize::infinite()};
    cfg.path = "fig4.csv";
  } else if (name == "fig5") {
    cfg.mus = {-0.05};
    cfg.sizes = {SystemSize::finite(100), SystemSize::finite(2000), SystemSize::infinite()};
    cfg.t_left = {0.0, 1.5, 101};
    cfg.diagonal = false;
    cfg.t_right = {0.0, 1.5, 101};
    cfg.path = "fig5.csv";
  } else if (name == "fig6") {
    cfg.v = 0.1;
    cfg.sizes = {SystemSize::finite(100), SystemSize::finite(1000), SystemSize::finite(2000),
                 SystemSize::infinite()};
    cfg.t_left = {0.0, 10.0, 201};
    cfg.path = "fig6.csv";
  } else if (name == "fig7") {
    cfg.mus = {-0.05};
    cfg.encode_lens = {1, 3};
    cfg.sizes = {SystemSize::finite(1000), SystemSize::infinite()};
    cfg.path = "fig7.csv";
  } else {
    config_fail("unknown preset '" + name + "' (expected fig4, fig5, fig6 or fig7)");
  }
  return cfg;
}

const char* status_name(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Clamped: return "clamped";
    case RowStatus::NonPhysical: return "nonphysical";
    case RowStatus::NoConvergence: return "noconvergence";
    case RowStatus::Domain: return "domain";
  }
  return "unknown";
}

std::size_t SweepResult::failed_count() const {
  return std::size_t(std::count_if(rows.begin(), rows.end(),
                                   [](const SweepRow& r) { return r.failed(); }));
}

SweepRow evaluate_row(const ModelParams& params, const ProtocolPoint& pt,
                      const QuadratureSpec& spec) {
  SweepRow row;
  row.t_left = pt.t_left;
  row.t_right = pt.t_right;
  row.mu = pt.mu;
  row.size = params.size();
  row.encode_len = pt.encode_len;
  auto poison = [&](RowStatus s) {
    const cplx nan{kNaN, kNaN};
    row.correlators = {nan, nan, nan, nan, kNaN, kNaN, kNaN, kNaN, row.correlators.mode};
    row.rho2 = row.rho4 = row.mutual_info = row.negativity = kNaN;
    row.status = s;
    return row;
  };
  try {
    row.correlators = evaluate(params, pt, spec);
  } catch (const NoConvergence&) {
    return poison(RowStatus::NoConvergence);
  } catch (const DomainError&) {
    return poison(RowStatus::Domain);
  }
  std::tie(row.rho2, row.rho4) = coefficients_from_correlators(row.correlators);
  auto dm = assemble(row.rho2, row.rho4);
  try {
    const auto im = info_measures(dm);
    row.mutual_info = im.mutual_info;
    row.negativity = im.negativity;
    row.status = dm.clamp_report.empty() ? RowStatus::Ok : RowStatus::Clamped;
  } catch (const NonPhysicalState&) {
    row.mutual_info = row.negativity = kNaN;
    row.status = RowStatus::NonPhysical;
  }
  return row;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();

  struct Task {
    std::size_t model;
    ProtocolPoint pt;
  };
  std::vector<ModelParams> models;
  for (const auto& n : cfg.sizes) models.push_back(ModelParams::large_q(cfg.q, cfg.v, cfg.beta, n));

  std::vector<Task> tasks;
  tasks.reserve(cfg.row_count());
  const int nr = cfg.diagonal ? 1 : cfg.t_right.count;
  for (std::size_t m = 0; m < models.size(); ++m)
    for (double mu : cfg.mus)
      for (int e : cfg.encode_lens)
        for (int i = 0; i < cfg.t_left.count; ++i)
          for (int j = 0; j < nr; ++j) {
            const double tl = cfg.t_left.at(i);
            const double tr = cfg.diagonal ? tl : cfg.t_right.at(j);
            tasks.push_back({m, ProtocolPoint{tl, tr, mu, e}});
          }

  SweepResult result;
  result.rows.resize(tasks.size());
  const std::size_t workers =
      std::min<std::size_t>(std::size_t(cfg.resolved_threads()), std::max<std::size_t>(1, tasks.size()));
  // Row k goes to worker k mod W: static, and interleaving spreads the cheap
  // N = inf rows evenly.
  auto work = [&](std::size_t w) {
    for (std::size_t k = w; k < tasks.size(); k += workers)
      result.rows[k] = evaluate_row(models[tasks[k].model], tasks[k].pt, cfg.quadrature);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return result;
}

const char* const kCsvHeader =
    "t_L,t_R,mu,N,encode_len,re_I1,im_I1,re_I2,im_I2,re_I3,im_I3,re_I4,im_I4,"
    "err_I1,err_I2,err_I3,err_I4,rho2,rho4,mutual_info,negativity,status";

void write_csv(const SweepResult& result, const SweepConfig& cfg, std::ostream& os) {
  const double scale = unit_scale(cfg.units);
  os << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    const auto& c = r.correlators;
    os << fmt(r.t_left) << ',' << fmt(r.t_right) << ',' << fmt(r.mu) << ','
       << size_text(r.size) << ',' << r.encode_len;
    for (const cplx& z : {c.i1, c.i2, c.i3, c.i4}) os << ',' << fmt(z.real()) << ',' << fmt(z.imag());
    for (double e : {c.err1, c.err2, c.err3, c.err4}) os << ',' << fmt(e);
    os << ',' << fmt(r.rho2) << ',' << fmt(r.rho4) << ',' << fmt(r.mutual_info * scale) << ','
       << fmt(r.negativity) << ',' << status_name(r.status) << '\n';
  }
}

void write_json(const SweepResult& result, const SweepConfig& cfg, std::ostream& os) {
  const double scale = unit_scale(cfg.units);
  os << '[';
  bool first = true;
  for (const auto& r : result.rows) {
    const auto& c = r.correlators;
    os << (first ? "\n" : ",\n") << "  {\"t_L\": " << fmt_json(r.t_left)
       << ", \"t_R\": " << fmt_json(r.t_right) << ", \"mu\": " << fmt_json(r.mu) << ", \"N\": ";
    if (r.size.is_infinite()) os << "\"inf\"";
    else os << fmt(r.size.value());
    os << ", \"encode_len\": " << r.encode_len;
    const char* names[] = {"I1", "I2", "I3", "I4"};
    const cplx vals[] = {c.i1, c.i2, c.i3, c.i4};
    for (int k = 0; k < 4; ++k)
      os << ", \"re_" << names[k] << "\": " << fmt_json(vals[k].real()) << ", \"im_" << names[k]
         << "\": " << fmt_json(vals[k].imag());
    const double errs[] = {c.err1, c.err2, c.err3, c.err4};
    for (int k = 0; k < 4; ++k) os << ", \"err_" << names[k] << "\": " << fmt_json(errs[k]);
    os << ", \"rho2\": " << fmt_json(r.rho2) << ", \"rho4\": " << fmt_json(r.rho4)
       << ", \"mutual_info\": " << fmt_json(r.mutual_info * scale)
       << ", \"negativity\": " << fmt_json(r.negativity) << ", \"status\": \""
       << status_name(r.status) << "\"}";
    first = false;
  }
  os << (first ? "]\n" : "\n]\n");
}

void emit(const SweepResult& result, const SweepConfig& cfg) {
  auto write_table = [&](std::ostream& os) {
    if (cfg.format == OutputFormat::Csv) write_csv(result, cfg, os);
    else write_json(result, cfg, os);
  };
  if (cfg.path.empty()) {
    write_table(std::cout);
    std::cout.flush();
    return;
  }
  {
    std::ofstream out(cfg.path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + cfg.path);
    write_table(out);
    if (!out) throw IoError("failed writing " + cfg.path);
  }
  json meta;
  meta["library"] = "scramblon";
  meta["version"] = SCRAMBLON_VERSION;
  meta["config"] = json::parse(config_to_json(cfg));
  meta["resolved_threads"] = cfg.resolved_threads();
  meta["rows"] = result.rows.size();
  meta["failed_rows"] = result.failed_count();
  const std::string meta_path = cfg.path + ".meta.json";
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw IoError("cannot open metadata file " + meta_path);
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + meta_path);
}

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json kernel_json(const GammaKernel& k) {
  return {{"shape", k.shape}, {"rate", cplx_json(k.rate)}, {"norm", cplx_json(k.norm)}};
}

const char* mode_name(CorrelatorMode m) {
  switch (m) {
    case CorrelatorMode::FiniteN: return "finite_n";
    case CorrelatorMode::ProbeLimit: return "probe_limit";
    case CorrelatorMode::LongTime: return "long_time";
  }
  return "unknown";
}

}  // namespace

std::string point_report(const ModelParams& params, const ProtocolPoint& pt,
                         const QuadratureSpec& spec) {
  pt.validate();
  const auto half = ComplexTime::half_beta(params.beta());
  const auto message_time = ComplexTime::half_beta(params.beta(), pt.t_lr());
  json doc;
  doc["model"] = {{"q", params.q()},
                  {"delta", params.delta()},
                  {"v", params.v()},
                  {"beta", params.beta()},
                  {"beta_J", params.coupling() * params.beta()},
                  {"kappa", params.kappa()},
                  {"N", params.size().is_infinite() ? json("inf") : json(params.size().value())},
                  {"C_over_N", params.prefactor_per_fermion()}};
  doc["point"] = {{"t_L", pt.t_left}, {"t_R", pt.t_right}, {"mu", pt.mu}, {"encode_len", pt.encode_len}};

  const double c_over_n = params.prefactor_per_fermion();
  json w = {{"N_lambda0", std::exp(0.5 * params.kappa() * (pt.t_left + pt.t_right)) / c_over_n},
            {"phase", cplx_json(std::polar(1.0, -0.25 * params.kappa() * params.beta()))}};
  if (!params.size().is_infinite()) {
    const auto sw = scramblon_weights(params, pt.t_left, pt.t_right);
    w["lambda0"] = sw.lambda0;
    w["lambda1"] = sw.lambda1;
  }
  doc["scramblon"] = w;
  doc["vertex"] = {{"G_half_beta", cplx_json(two_point(params, half))},
                   {"upsilon1_half_beta", cplx_json(moment(base_kernel(params, half), 1))},
                   {"message_kernel", kernel_json(string_kernel(params, message_time, pt.encode_len))},
                   {"spectator_kernel",
                    kernel_json(string_kernel(params, ComplexTime::zero(), pt.encode_len))}};

  const SweepRow row = evaluate_row(params, pt, spec);
  const auto& c = row.correlators;
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  auto cnum = [&](cplx z) { return json::array({num(z.real()), num(z.imag())}); };
  doc["correlators"] = {{"mode", mode_name(c.mode)},
                        {"I1", cnum(c.i1)}, {"I2", cnum(c.i2)}, {"I3", cnum(c.i3)}, {"I4", cnum(c.i4)},
                        {"err", {num(c.err1), num(c.err2), num(c.err3), num(c.err4)}}};
  doc["state"] = {{"rho2", num(row.rho2)}, {"rho4", num(row.rho4)}};
  if (std::isfinite(row.rho2) && std::isfinite(row.rho4)) {
    const auto dm = assemble(row.rho2, row.rho4);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(dm.matrix, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> pt_es(partial_transpose_p(dm.matrix),
                                                          Eigen::EigenvaluesOnly);
    json ev = json::array(), pev = json::array();
    for (int k = 3; k >= 0; --k) {
      ev.push_back(es.eigenvalues()[k]);
      pev.push_back(pt_es.eigenvalues()[k]);
    }
    doc["state"]["eigenvalues"] = ev;
    doc["state"]["partial_transpose_eigenvalues"] = pev;
  }
  doc["info"] = {{"mutual_info_nats", num(row.mutual_info)},
                 {"negativity", num(row.negativity)},
                 {"status", status_name(row.status)}};
  return doc.dump(2);
}

}  // namespace scramblon
