#include "scramblon/scramblon.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <sstream>
#include <string>

#include "scramblon/errors.hpp"
#include "scramblon/info_measures.hpp"
#include "scramblon/sweep.hpp"

struct scr_model {
  scramblon::ModelParams params;
};

struct scr_sweep {
  scramblon::SweepConfig config;
  std::optional<scramblon::SweepResult> result;
};

namespace {

thread_local std::string last_error;

scr_status fail(scr_status s, const char* msg) {
  last_error = msg;
  return s;
}

template <class F>
scr_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return SCR_OK;
  } catch (const scramblon::ConfigError& e) {
    return fail(SCR_ERR_CONFIG, e.what());
  } catch (const scramblon::IoError& e) {
    return fail(SCR_ERR_IO, e.what());
  } catch (const scramblon::NoConvergence& e) {
    return fail(SCR_ERR_NO_CONVERGENCE, e.what());
  } catch (const scramblon::NonPhysicalState& e) {
    return fail(SCR_ERR_NONPHYSICAL, e.what());
  } catch (const scramblon::InfiniteSizeError& e) {
    return fail(SCR_ERR_INFINITE_SIZE, e.what());
  } catch (const scramblon::DomainError& e) {
    return fail(SCR_ERR_DOMAIN, e.what());
  } catch (const scramblon::ArgumentError& e) {
    return fail(SCR_ERR_ARGUMENT, e.what());
  } catch (const scramblon::RateMismatch& e) {
    return fail(SCR_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(SCR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SCR_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const scramblon::SweepRow& row, scr_point_result* out) {
  const auto& c = row.correlators;
  const scramblon::cplx z[] = {c.i1, c.i2, c.i3, c.i4};
  const double e[] = {c.err1, c.err2, c.err3, c.err4};
  for (int k = 0; k < 4; ++k) {
    out->re[k] = z[k].real();
    out->im[k] = z[k].imag();
    out->err[k] = e[k];
  }
  out->rho2 = row.rho2;
  out->rho4 = row.rho4;
  out->mutual_info = row.mutual_info;
  out->negativity = row.negativity;
  out->status = static_cast<int>(row.status);
}

scramblon::ProtocolPoint make_point(double tl, double tr, double mu, int e) {
  scramblon::ProtocolPoint pt{tl, tr, mu, e};
  pt.validate();
  return pt;
}

}  // namespace

extern "C" {

const char* scr_version(void) { return SCRAMBLON_VERSION; }

const char* scr_last_error(void) { return last_error.c_str(); }

const char* scr_status_string(scr_status s) {
  switch (s) {
    case SCR_OK: return "ok";
    case SCR_ERR_ARGUMENT: return "invalid argument";
    case SCR_ERR_DOMAIN: return "domain error";
    case SCR_ERR_CONFIG: return "configuration error";
    case SCR_ERR_IO: return "I/O error";
    case SCR_ERR_NO_CONVERGENCE: return "quadrature did not converge";
    case SCR_ERR_NONPHYSICAL: return "non-physical state";
    case SCR_ERR_INFINITE_SIZE: return "operation needs finite N";
    case SCR_ERR_STATE: return "invalid object state";
    case SCR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void scr_string_free(char* s) { std::free(s); }

scr_status scr_model_create(int q, double v, double beta, double n, scr_model** out) {
  if (!out) return fail(SCR_ERR_ARGUMENT, "out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto size = (n <= 0.0 || std::isinf(n)) ? scramblon::SystemSize::infinite()
                                                  : scramblon::SystemSize::finite(n);
    *out = new scr_model{scramblon::ModelParams::large_q(q, v, beta, size)};
  });
}

void scr_model_destroy(scr_model* model) { delete model; }

scr_status scr_point_evaluate(const scr_model* model, double t_left, double t_right, double mu,
                              int encode_len, scr_point_result* out) {
  if (!model || !out) return fail(SCR_ERR_ARGUMENT, "model and out must not be NULL");
  return guarded([&] {
    const auto pt = make_point(t_left, t_right, mu, encode_len);
    fill(scramblon::evaluate_row(model->params, pt, scramblon::QuadratureSpec{}), out);
  });
}

scr_status scr_point_report_json(const scr_model* model, double t_left, double t_right,
                                 double mu, int encode_len, char** out_json) {
  if (!model || !out_json) return fail(SCR_ERR_ARGUMENT, "model and out_json must not be NULL");
  *out_json = nullptr;
  return guarded([&] {
    const auto pt = make_point(t_left, t_right, mu, encode_len);
    *out_json = dup_string(scramblon::point_report(model->params, pt, scramblon::QuadratureSpec{}));
  });
}

scr_status scr_sweep_load(const char* path, scr_sweep** out) {
  if (!path || !out) return fail(SCR_ERR_ARGUMENT, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new scr_sweep{scramblon::load_config(path), std::nullopt}; });
}

scr_status scr_sweep_from_json(const char* text, scr_sweep** out) {
  if (!text || !out) return fail(SCR_ERR_ARGUMENT, "text and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new scr_sweep{scramblon::parse_config(text), std::nullopt}; });
}

scr_status scr_sweep_preset(const char* name, scr_sweep** out) {
  if (!name || !out) return fail(SCR_ERR_ARGUMENT, "name and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new scr_sweep{scramblon::preset(name), std::nullopt}; });
}

scr_status scr_sweep_config_json(const scr_sweep* sweep, char** out_json) {
  if (!sweep || !out_json) return fail(SCR_ERR_ARGUMENT, "sweep and out_json must not be NULL");
  *out_json = nullptr;
  return guarded([&] { *out_json = dup_string(scramblon::config_to_json(sweep->config)); });
}

scr_status scr_sweep_set_threads(scr_sweep* sweep, int threads) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  if (threads < 0) return fail(SCR_ERR_CONFIG, "threads must be >= 0 (0 = auto)");
  sweep->config.threads = threads;
  last_error.clear();
  return SCR_OK;
}

scr_status scr_sweep_set_output(scr_sweep* sweep, const char* path, const char* format) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  if (format) {
    if (std::strcmp(format, "csv") == 0) sweep->config.format = scramblon::OutputFormat::Csv;
    else if (std::strcmp(format, "json") == 0) sweep->config.format = scramblon::OutputFormat::Json;
    else return fail(SCR_ERR_CONFIG, "format must be \"csv\" or \"json\"");
  }
  if (path) sweep->config.path = path;
  last_error.clear();
  return SCR_OK;
}

scr_status scr_sweep_run(scr_sweep* sweep) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  return guarded([&] { sweep->result = scramblon::run_sweep(sweep->config); });
}

scr_status scr_sweep_counts(const scr_sweep* sweep, size_t* rows, size_t* failed) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  if (!sweep->result) return fail(SCR_ERR_STATE, "sweep has not been run");
  if (rows) *rows = sweep->result->rows.size();
  if (failed) *failed = sweep->result->failed_count();
  last_error.clear();
  return SCR_OK;
}

scr_status scr_sweep_row(const scr_sweep* sweep, size_t index, double* t_left, double* t_right,
                         double* mu, double* n, int* encode_len, scr_point_result* out) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  if (!sweep->result) return fail(SCR_ERR_STATE, "sweep has not been run");
  if (index >= sweep->result->rows.size()) return fail(SCR_ERR_ARGUMENT, "row index out of range");
  const auto& row = sweep->result->rows[index];
  if (t_left) *t_left = row.t_left;
  if (t_right) *t_right = row.t_right;
  if (mu) *mu = row.mu;
  if (n) *n = row.size.is_infinite() ? INFINITY : row.size.value();
  if (encode_len) *encode_len = row.encode_len;
  if (out) fill(row, out);
  last_error.clear();
  return SCR_OK;
}

scr_status scr_sweep_write(const scr_sweep* sweep) {
  if (!sweep) return fail(SCR_ERR_ARGUMENT, "sweep must not be NULL");
  if (!sweep->result) return fail(SCR_ERR_STATE, "sweep has not been run");
  return guarded([&] { scramblon::emit(*sweep->result, sweep->config); });
}

scr_status scr_sweep_render(const scr_sweep* sweep, char** out_text) {
  if (!sweep || !out_text) return fail(SCR_ERR_ARGUMENT, "sweep and out_text must not be NULL");
  *out_text = nullptr;
  if (!sweep->result) return fail(SCR_ERR_STATE, "sweep has not been run");
  return guarded([&] {
    std::ostringstream os;
    if (sweep->config.format == scramblon::OutputFormat::Csv)
      scramblon::write_csv(*sweep->result, sweep->config, os);
    else
      scramblon::write_json(*sweep->result, sweep->config, os);
    *out_text = dup_string(os.str());
  });
}

void scr_sweep_destroy(scr_sweep* sweep) { delete sweep; }

}  // extern "C"
