#include "srsp/srsp.h"

#include <exception>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "srsp/commands.hpp"
#include "srsp/error.hpp"
#include "srsp/integrator.hpp"
#include "srsp/snapshot.hpp"

struct srsp_config {
  std::string text;
  std::string source;
  std::vector<srsp::ConfigOverride> overrides;
  srsp::RunConfig cfg;
};

struct srsp_ensemble {
  srsp::Ensemble e;
};

namespace {

thread_local std::string g_last_error;

srsp_status to_status(srsp::ErrorCode code) {
  using srsp::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SRSP_E_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return SRSP_E_DIMENSION;
    case ErrorCode::OutOfRange: return SRSP_E_RANGE;
    case ErrorCode::Parse: return SRSP_E_PARSE;
    case ErrorCode::Constraint: return SRSP_E_CONSTRAINT;
    case ErrorCode::Io: return SRSP_E_IO;
    case ErrorCode::Format: return SRSP_E_FORMAT;
    case ErrorCode::BlowUp: return SRSP_E_BLOWUP;
    case ErrorCode::VerificationFailed: return SRSP_E_VERIFICATION;
  }
  return SRSP_E_INTERNAL;
}

template <class F>
srsp_status guard(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const srsp::Error& err) {
    g_last_error = err.what();
    return to_status(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return SRSP_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return SRSP_E_INTERNAL;
  }
}

srsp_status invalid(const char* what) {
  g_last_error = what;
  return SRSP_E_INVALID_ARGUMENT;
}

srsp::LineSink adapt(srsp_line_fn log, void* user) {
  if (!log) return {};
  return [log, user](const std::string& line) { log(line.c_str(), user); };
}

srsp::Coupling coupling_of(int flag) { return flag ? srsp::Coupling::On : srsp::Coupling::Off; }

}  // namespace

extern "C" {

const char* srsp_version(void) { return "1.0.0"; }

const char* srsp_status_name(srsp_status status) {
  switch (status) {
    case SRSP_OK: return "SRSP_OK";
    case SRSP_E_INVALID_ARGUMENT: return "SRSP_E_INVALID_ARGUMENT";
    case SRSP_E_DIMENSION: return "SRSP_E_DIMENSION";
    case SRSP_E_RANGE: return "SRSP_E_RANGE";
    case SRSP_E_PARSE: return "SRSP_E_PARSE";
    case SRSP_E_CONSTRAINT: return "SRSP_E_CONSTRAINT";
    case SRSP_E_IO: return "SRSP_E_IO";
    case SRSP_E_FORMAT: return "SRSP_E_FORMAT";
    case SRSP_E_BLOWUP: return "SRSP_E_BLOWUP";
    case SRSP_E_VERIFICATION: return "SRSP_E_VERIFICATION";
    case SRSP_E_INTERNAL: return "SRSP_E_INTERNAL";
  }
  return "SRSP_E_UNKNOWN";
}

const char* srsp_last_error(void) { return g_last_error.c_str(); }

srsp_status srsp_config_load(const char* path, srsp_config** out) {
  if (!path || !out) return invalid("srsp_config_load: null argument");
  return guard([&] {
    auto cfg = std::make_unique<srsp_config>();
    cfg->source = path;
    cfg->cfg = srsp::load_config(path);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg->text = ss.str();
    *out = cfg.release();
    return SRSP_OK;
  });
}

srsp_status srsp_config_parse(const char* text, srsp_config** out) {
  if (!text || !out) return invalid("srsp_config_parse: null argument");
  return guard([&] {
    auto cfg = std::make_unique<srsp_config>();
    cfg->text = text;
    cfg->source = "<config>";
    cfg->cfg = srsp::parse_config(cfg->text, cfg->source);
    *out = cfg.release();
    return SRSP_OK;
  });
}

srsp_status srsp_config_set(srsp_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return invalid("srsp_config_set: null argument");
  return guard([&] {
    auto overrides = cfg->overrides;
    overrides.emplace_back(key, value);
    cfg->cfg = srsp::parse_config(cfg->text, cfg->source, overrides);
    cfg->overrides = std::move(overrides);
    return SRSP_OK;
  });
}

void srsp_config_free(srsp_config* cfg) { delete cfg; }

srsp_status srsp_command_run(const srsp_config* cfg, srsp_line_fn log, void* user) {
  if (!cfg) return invalid("srsp_command_run: null config");
  return guard([&] {
    srsp::command_run(cfg->cfg, adapt(log, user));
    return SRSP_OK;
  });
}

srsp_status srsp_command_verify(const srsp_config* cfg, srsp_line_fn log, void* user) {
  if (!cfg) return invalid("srsp_command_verify: null config");
  return guard([&] {
    const auto outcome = srsp::command_verify(cfg->cfg, adapt(log, user));
    if (!outcome.passed) {
      g_last_error = outcome.failures.empty() ? "verification failed" : outcome.failures.front();
      return SRSP_E_VERIFICATION;
    }
    return SRSP_OK;
  });
}

srsp_status srsp_command_converge(const srsp_config* cfg, srsp_line_fn log, void* user) {
  if (!cfg) return invalid("srsp_command_converge: null config");
  return guard([&] {
    srsp::command_converge(cfg->cfg, adapt(log, user));
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_create(const srsp_config* cfg, srsp_ensemble** out) {
  if (!cfg || !out) return invalid("srsp_ensemble_create: null argument");
  return guard([&] {
    *out = new srsp_ensemble{srsp::initial_ensemble(cfg->cfg)};
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_read_snapshot(const srsp_config* cfg, const char* path, srsp_ensemble** out) {
  if (!cfg || !path || !out) return invalid("srsp_ensemble_read_snapshot: null argument");
  return guard([&] {
    auto basis = std::make_shared<const srsp::SineBasis>(cfg->cfg.domain);
    *out = new srsp_ensemble{srsp::read_snapshot(path, basis)};
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_write_snapshot(const srsp_ensemble* e, const char* path) {
  if (!e || !path) return invalid("srsp_ensemble_write_snapshot: null argument");
  return guard([&] {
    srsp::write_snapshot(e->e, path);
    return SRSP_OK;
  });
}

void srsp_ensemble_free(srsp_ensemble* e) { delete e; }

size_t srsp_ensemble_count(const srsp_ensemble* e) { return e ? e->e.size() : 0; }

size_t srsp_ensemble_mode_count(const srsp_ensemble* e) { return e ? e->e.basis().mode_count() : 0; }

srsp_status srsp_ensemble_coefficients(const srsp_ensemble* e, size_t k, double* out, size_t len) {
  if (!e || !out) return invalid("srsp_ensemble_coefficients: null argument");
  return guard([&] {
    if (k >= e->e.size()) throw srsp::Error(srsp::ErrorCode::OutOfRange, "wavefunction index beyond K");
    const auto& c = e->e.wavefunction(k);
    if (len != 2 * c.size()) throw srsp::Error(srsp::ErrorCode::DimensionMismatch, "buffer length must be 2 * mode count");
    for (std::size_t n = 0; n < c.size(); ++n) {
      out[2 * n] = c[n].real();
      out[2 * n + 1] = c[n].imag();
    }
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_set_coefficients(srsp_ensemble* e, size_t k, const double* in, size_t len) {
  if (!e || !in) return invalid("srsp_ensemble_set_coefficients: null argument");
  return guard([&] {
    if (k >= e->e.size()) throw srsp::Error(srsp::ErrorCode::OutOfRange, "wavefunction index beyond K");
    auto& c = e->e.wavefunction(k);
    if (len != 2 * c.size()) throw srsp::Error(srsp::ErrorCode::DimensionMismatch, "buffer length must be 2 * mode count");
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = {in[2 * n], in[2 * n + 1]};
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_step(srsp_ensemble* e, srsp_scheme scheme, double dt, int coupling, size_t steps) {
  if (!e) return invalid("srsp_ensemble_step: null ensemble");
  return guard([&] {
    srsp::Scheme s;
    switch (scheme) {
      case SRSP_SCHEME_STRANG: s = srsp::Scheme::Strang; break;
      case SRSP_SCHEME_LIE: s = srsp::Scheme::Lie; break;
      case SRSP_SCHEME_DUHAMEL_MIDPOINT: s = srsp::Scheme::DuhamelMidpoint; break;
      default: throw srsp::Error(srsp::ErrorCode::InvalidArgument, "unknown scheme");
    }
    for (std::size_t i = 0; i < steps; ++i) e->e = srsp::step(std::move(e->e), dt, s, coupling_of(coupling));
    return SRSP_OK;
  });
}

srsp_status srsp_ensemble_diagnostics(const srsp_ensemble* e, double t, int coupling, srsp_diagnostics* out) {
  if (!e || !out) return invalid("srsp_ensemble_diagnostics: null argument");
  return guard([&] {
    const auto r = srsp::record(e->e, t, coupling_of(coupling));
    *out = {r.t, r.mass, r.energy_Tm, r.energy_half_p, r.potential_energy, r.h12, r.h1, r.gram_defect, r.density_min};
    return SRSP_OK;
  });
}

}  // extern "C"
