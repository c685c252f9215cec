#include "ttv.h"

#include <cstring>
#include <string>

#include "ttv/experiment.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& what) { g_last_error = what; }

}  // namespace

struct ttv_experiment {
  ttv::ExperimentConfig config;
  bool ran = false;
  std::string summary;
  std::string stop_reason;
};

extern "C" {

const char* ttv_version(void) { return "ttv 1.0.0"; }

const char* ttv_last_error(void) { return g_last_error.c_str(); }

ttv_experiment* ttv_experiment_create(const char* config_json) {
  if (config_json == nullptr) {
    set_error("config_json is NULL");
    return nullptr;
  }
  try {
    auto* e = new ttv_experiment;
    e->config = ttv::config_from_json(config_json);
    return e;
  } catch (const std::exception& ex) {
    set_error(ex.what());
    return nullptr;
  }
}

int ttv_experiment_run(ttv_experiment* e) {
  if (e == nullptr) {
    set_error("experiment handle is NULL");
    return TTV_ERR_INVALID_ARGUMENT;
  }
  if (e->ran) return TTV_OK;
  try {
    ttv::ExperimentResult res = ttv::run_experiment(e->config);
    e->summary = ttv::result_to_json(e->config, res);
    e->stop_reason = res.stop_reason;
    e->ran = true;
    return TTV_OK;
  } catch (const std::exception& ex) {
    set_error(ex.what());
    return TTV_ERR_RUNTIME;
  }
}

const char* ttv_experiment_summary(const ttv_experiment* e) {
  if (e == nullptr || !e->ran) {
    set_error("experiment has not been run");
    return nullptr;
  }
  return e->summary.c_str();
}

const char* ttv_experiment_stop_reason(const ttv_experiment* e) {
  if (e == nullptr || !e->ran) {
    set_error("experiment has not been run");
    return nullptr;
  }
  return e->stop_reason.c_str();
}

void ttv_experiment_destroy(ttv_experiment* e) { delete e; }

int ttv_trace_report(const char* trace_path, char** text_out) {
  if (trace_path == nullptr || text_out == nullptr) {
    set_error("NULL argument");
    return TTV_ERR_INVALID_ARGUMENT;
  }
  try {
    const std::string text = ttv::summarize_trace(ttv::load_trace_file(trace_path));
    *text_out = new char[text.size() + 1];
    std::memcpy(*text_out, text.c_str(), text.size() + 1);
    return TTV_OK;
  } catch (const std::exception& ex) {
    set_error(ex.what());
    return TTV_ERR_RUNTIME;
  }
}

void ttv_free(char* p) { delete[] p; }

}  // extern "C"
