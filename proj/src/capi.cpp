#include "tordust.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "tordust/config.hpp"
#include "tordust/errors.hpp"
#include "tordust/plotdata.hpp"
#include "tordust/runner.hpp"
#include "tordust/verify.hpp"

struct td_config {
  tordust::SimConfig cfg;
};

struct td_run_result {
  tordust::RunArtifacts art;
};

namespace {

thread_local std::string g_last_error;

td_status map_code(tordust::ErrCode c) {
  using tordust::ErrCode;
  switch (c) {
    case ErrCode::invalid_argument:
    case ErrCode::invalid_config:
    case ErrCode::config_mismatch:
    case ErrCode::amplitude_too_large:
    case ErrCode::cfl_violation:
      return TD_INVALID;
    default:
      return TD_ERROR;
  }
}

template <typename F>
td_status guarded(F&& f) {
  try {
    return static_cast<td_status>(f());
  } catch (const tordust::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TD_ERROR;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

td_status bad_argument(const char* what) {
  g_last_error = what;
  return TD_INVALID;
}

}  // namespace

extern "C" {

const char* td_version(void) { return "1.0.0"; }

const char* td_last_error(void) { return g_last_error.c_str(); }

void td_string_free(char* s) { std::free(s); }

td_status td_config_default(td_config** out) {
  if (!out) return bad_argument("null out");
  *out = new td_config{tordust::default_config()};
  return TD_OK;
}

td_status td_config_parse(const char* json_text, td_config** out) {
  if (!json_text || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new td_config{tordust::parse_config(json_text)};
    return TD_OK;
  });
}

td_status td_config_load(const char* path, td_config** out) {
  if (!path || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new td_config{tordust::load_config(path)};
    return TD_OK;
  });
}

void td_config_free(td_config* cfg) { delete cfg; }

td_status td_config_serialize(const td_config* cfg, char** json_out) {
  if (!cfg || !json_out) return bad_argument("null argument");
  return guarded([&] {
    *json_out = dup_string(tordust::serialize_config(cfg->cfg));
    return TD_OK;
  });
}

td_status td_config_hash(const td_config* cfg, uint64_t* out) {
  if (!cfg || !out) return bad_argument("null argument");
  return guarded([&] {
    *out = tordust::config_hash(cfg->cfg);
    return TD_OK;
  });
}

td_status td_run(const td_config* cfg, td_run_result** out) {
  if (!cfg || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new td_run_result{tordust::run_to_disk(cfg->cfg)};
    *out = r;
    return r->art.exit_code;
  });
}

td_status td_run_resume(const td_config* cfg, const char* checkpoint_path,
                        td_run_result** out) {
  if (!cfg || !checkpoint_path || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    auto* r = new td_run_result{tordust::resume_from_checkpoint(cfg->cfg, checkpoint_path)};
    *out = r;
    return r->art.exit_code;
  });
}

void td_run_result_free(td_run_result* r) { delete r; }

int td_run_exit_code(const td_run_result* r) { return r ? r->art.exit_code : -1; }

const char* td_run_breakdown(const td_run_result* r) {
  return r ? r->art.breakdown.c_str() : "";
}

const char* td_run_directory(const td_run_result* r) {
  return r ? r->art.directory.c_str() : "";
}

const char* td_run_csv_path(const td_run_result* r) {
  return r ? r->art.csv_path.c_str() : "";
}

const char* td_run_manifest_path(const td_run_result* r) {
  return r ? r->art.manifest_path.c_str() : "";
}

double td_run_final_time(const td_run_result* r) { return r ? r->art.final_time : 0.0; }

double td_run_wall_seconds(const td_run_result* r) { return r ? r->art.wall_seconds : 0.0; }

int td_run_samples(const td_run_result* r) { return r ? r->art.samples : 0; }

td_status td_verify(const char* suite, int* pass, char** report_json) {
  if (!suite || !pass) return bad_argument("null argument");
  return guarded([&] {
    const tordust::SuiteReport rep = tordust::verify_suite(suite);
    *pass = rep.pass ? 1 : 0;
    if (report_json) *report_json = dup_string(tordust::verify_report_json(rep));
    return TD_OK;
  });
}

td_status td_verify_criterion(int id, int* pass, char** report_json) {
  if (!pass) return bad_argument("null argument");
  return guarded([&] {
    tordust::SuiteReport rep;
    rep.suite = "criterion";
    rep.criteria.push_back(tordust::verify_criterion(id));
    rep.pass = rep.criteria.back().pass;
    rep.wall_seconds = rep.criteria.back().wall_seconds;
    *pass = rep.pass ? 1 : 0;
    if (report_json) *report_json = dup_string(tordust::verify_report_json(rep));
    return TD_OK;
  });
}

td_status td_plotdata(const char* diagnostics_csv, const char* quantities, char** csv_out) {
  if (!diagnostics_csv || !quantities || !csv_out) return bad_argument("null argument");
  *csv_out = nullptr;
  return guarded([&] {
    std::vector<std::string> names;
    std::string cur;
    for (const char* p = quantities;; ++p) {
      if (*p == ',' || *p == '\0') {
        if (!cur.empty()) names.push_back(cur);
        cur.clear();
        if (*p == '\0') break;
      } else {
        cur += *p;
      }
    }
    if (names.empty()) tordust::fail(tordust::ErrCode::invalid_argument, "no quantities given");
    *csv_out = dup_string(
        tordust::plotdata_csv(tordust::extract_plotdata(diagnostics_csv, names)));
    return TD_OK;
  });
}

}  // extern "C"
