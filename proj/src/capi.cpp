#include "riccikit.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "riccikit/config.hpp"
#include "riccikit/engine.hpp"
#include "riccikit/errors.hpp"
#include "riccikit/report.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(std::string msg) { g_last_error = std::move(msg); }

}  // namespace

struct rk_config {
  std::optional<nlohmann::json> document;
  std::optional<std::string> metric;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> four_pi_g;

  rk::RunConfig materialize() const {
    rk::RunConfig out = [&] {
      if (document && document->contains("metric")) {
        rk::RunConfig parsed = rk::parse_config(*document);
        // Selecting a builtin on top of a document keeps the document's
        // fields only when the coordinates still match.
        if (metric) rk::override_metric(parsed, *metric);
        return parsed;
      }
      if (document && metric) {
        // Document supplies everything but the metric: pair the two.  Field
        // expressions are parsed against the selected chart and fail loudly
        // if they do not fit it.
        nlohmann::json j = *document;
        j["metric"] = *metric;
        return rk::parse_config(j);
      }
      if (metric) return rk::config_for_metric(*metric);
      if (document)
        throw rk::config_error(
            "config: document has no \"metric\" — add one or select a builtin metric");
      throw rk::config_error(
          "config: nothing to run — load a configuration document or select a builtin metric");
    }();
    if (seed) rk::override_seed(out, *seed);
    if (samples) rk::override_samples(out, *samples);
    if (four_pi_g) rk::override_four_pi_g(out, *four_pi_g);
    return out;
  }
};

struct rk_report {
  rk::Report report;
  std::string json;
  std::string table;
};

namespace {

// Translate an in-flight exception into a status code, capturing its message.
rk_status capture_error() {
  try {
    throw;
  } catch (const rk::parse_error& e) {
    set_error(e.what());
    return RK_ERR_PARSE;
  } catch (const rk::config_error& e) {
    set_error(e.what());
    return RK_ERR_CONFIG;
  } catch (const rk::domain_error& e) {
    set_error(e.what());
    return RK_ERR_DOMAIN;
  } catch (const rk::degenerate_metric_error& e) {
    set_error(e.what());
    return RK_ERR_DEGENERATE_METRIC;
  } catch (const rk::precondition_error& e) {
    set_error(e.what());
    return RK_ERR_PRECONDITION;
  } catch (const rk::error& e) {
    set_error(e.what());
    return RK_ERR_INTERNAL;
  } catch (const nlohmann::json::parse_error& e) {
    set_error(e.what());
    return RK_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return RK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RK_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return RK_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* rk_version(void) { return "1.0.0"; }

const char* rk_status_name(rk_status status) {
  switch (status) {
    case RK_OK: return "RK_OK";
    case RK_ERR_INVALID_ARGUMENT: return "RK_ERR_INVALID_ARGUMENT";
    case RK_ERR_PARSE: return "RK_ERR_PARSE";
    case RK_ERR_CONFIG: return "RK_ERR_CONFIG";
    case RK_ERR_DOMAIN: return "RK_ERR_DOMAIN";
    case RK_ERR_DEGENERATE_METRIC: return "RK_ERR_DEGENERATE_METRIC";
    case RK_ERR_PRECONDITION: return "RK_ERR_PRECONDITION";
    case RK_ERR_IO: return "RK_ERR_IO";
    case RK_ERR_INTERNAL: return "RK_ERR_INTERNAL";
  }
  return "RK_ERR_UNKNOWN";
}

const char* rk_last_error(void) { return g_last_error.c_str(); }

rk_config* rk_config_create(void) { return new (std::nothrow) rk_config(); }

rk_status rk_config_load_file(rk_config* cfg, const char* path) {
  if (!cfg || !path) {
    set_error("rk_config_load_file: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  std::ifstream in(path);
  if (!in) {
    set_error(std::string("cannot open \"") + path + "\"");
    return RK_ERR_IO;
  }
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) {
    set_error(std::string("error while reading \"") + path + "\"");
    return RK_ERR_IO;
  }
  return rk_config_load_json(cfg, text.str().c_str());
}

rk_status rk_config_load_json(rk_config* cfg, const char* json_text) {
  if (!cfg || !json_text) {
    set_error("rk_config_load_json: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  try {
    nlohmann::json parsed = nlohmann::json::parse(json_text);
    if (!parsed.is_object()) {
      set_error("configuration document must be a JSON object");
      return RK_ERR_CONFIG;
    }
    // Validate eagerly (with current overrides) so errors surface here
    // rather than at the first run.  A document without a metric is kept
    // unvalidated until one is selected.
    rk_config probe = *cfg;
    probe.document = parsed;
    if (parsed.contains("metric") || probe.metric) probe.materialize();
    cfg->document = std::move(parsed);
    return RK_OK;
  } catch (...) {
    return capture_error();
  }
}

rk_status rk_config_set_metric(rk_config* cfg, const char* builtin_name) {
  if (!cfg || !builtin_name) {
    set_error("rk_config_set_metric: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  try {
    rk_config probe = *cfg;
    probe.metric = builtin_name;
    probe.materialize();
    cfg->metric = builtin_name;
    return RK_OK;
  } catch (...) {
    return capture_error();
  }
}

rk_status rk_config_set_seed(rk_config* cfg, uint64_t seed) {
  if (!cfg) {
    set_error("rk_config_set_seed: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  cfg->seed = seed;
  return RK_OK;
}

rk_status rk_config_set_samples(rk_config* cfg, int samples) {
  if (!cfg) {
    set_error("rk_config_set_samples: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  if (samples < 1) {
    set_error("samples must be at least 1");
    return RK_ERR_INVALID_ARGUMENT;
  }
  cfg->samples = samples;
  return RK_OK;
}

rk_status rk_config_set_coupling(rk_config* cfg, double four_pi_g) {
  if (!cfg) {
    set_error("rk_config_set_coupling: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  if (!(four_pi_g > 0.0) || !std::isfinite(four_pi_g)) {
    set_error("coupling constant must be positive and finite");
    return RK_ERR_INVALID_ARGUMENT;
  }
  cfg->four_pi_g = four_pi_g;
  return RK_OK;
}

void rk_config_destroy(rk_config* cfg) { delete cfg; }

rk_status rk_run(const rk_config* cfg, const char* command, rk_report** out_report) {
  if (out_report) *out_report = nullptr;
  if (!cfg || !command || !out_report) {
    set_error("rk_run: null argument");
    return RK_ERR_INVALID_ARGUMENT;
  }
  try {
    rk::RunConfig run_cfg = cfg->materialize();
    auto rep = std::make_unique<rk_report>();
    rep->report = rk::run_command(command, run_cfg);
    rep->json = rep->report.to_json_string();
    rep->table = rep->report.to_table();
    *out_report = rep.release();
    return RK_OK;
  } catch (...) {
    return capture_error();
  }
}

const char* rk_command_list(void) { return "curvature conformal atp flow report-all"; }

int rk_report_pass(const rk_report* rep) { return rep && rep->report.pass() ? 1 : 0; }

const char* rk_report_json(const rk_report* rep) { return rep ? rep->json.c_str() : nullptr; }

const char* rk_report_table(const rk_report* rep) { return rep ? rep->table.c_str() : nullptr; }

size_t rk_report_check_count(const rk_report* rep) {
  return rep ? rep->report.checks.size() : 0;
}

const char* rk_report_check_name(const rk_report* rep, size_t index) {
  if (!rep || index >= rep->report.checks.size()) return nullptr;
  return rep->report.checks[index].name.c_str();
}

double rk_report_check_residual(const rk_report* rep, size_t index) {
  if (!rep || index >= rep->report.checks.size()) return std::nan("");
  return rep->report.checks[index].residual;
}

double rk_report_check_tol(const rk_report* rep, size_t index) {
  if (!rep || index >= rep->report.checks.size()) return std::nan("");
  return rep->report.checks[index].tol;
}

int rk_report_check_pass(const rk_report* rep, size_t index) {
  if (!rep || index >= rep->report.checks.size()) return 0;
  return rep->report.checks[index].pass ? 1 : 0;
}

void rk_report_destroy(rk_report* rep) { delete rep; }

}  // extern "C"
