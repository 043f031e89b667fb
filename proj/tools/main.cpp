#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "tordust.h"

namespace {

int fail_with(td_status st) {
  std::fprintf(stderr, "error: %s\n", td_last_error());
  return static_cast<int>(st);
}

int cmd_run(const std::string& config_path, const std::string& resume_path) {
  td_config* cfg = nullptr;
  td_status st = td_config_load(config_path.c_str(), &cfg);
  if (st != TD_OK) return fail_with(st);

  td_run_result* res = nullptr;
  st = resume_path.empty() ? td_run(cfg, &res)
                           : td_run_resume(cfg, resume_path.c_str(), &res);
  td_config_free(cfg);
  if (!res) return fail_with(st);

  std::printf("output: %s\n", td_run_directory(res));
  std::printf("samples: %d\n", td_run_samples(res));
  std::printf("final_time: %.17g\n", td_run_final_time(res));
  std::printf("wall_seconds: %.3f\n", td_run_wall_seconds(res));
  const int code = td_run_exit_code(res);
  if (code != 0) std::printf("breakdown: %s (exit %d)\n", td_run_breakdown(res), code);
  td_run_result_free(res);
  return code;
}

int cmd_verify(const std::string& suite, int criterion) {
  int pass = 0;
  char* report = nullptr;
  const td_status st = criterion > 0 ? td_verify_criterion(criterion, &pass, &report)
                                     : td_verify(suite.c_str(), &pass, &report);
  if (st != TD_OK) return fail_with(st);
  std::fputs(report, stdout);
  std::fputc('\n', stdout);
  td_string_free(report);
  return pass ? 0 : 1;
}

int cmd_plotdata(const std::string& input, const std::string& quantities,
                 const std::string& out_path) {
  std::filesystem::path p(input);
  std::error_code ec;
  if (std::filesystem::is_directory(p, ec)) p /= "diagnostics.csv";
  char* out = nullptr;
  const td_status st = td_plotdata(p.string().c_str(), quantities.c_str(), &out);
  if (st != TD_OK) return fail_with(st);
  int rc = 0;
  if (out_path.empty()) {
    std::fputs(out, stdout);
  } else if (FILE* f = std::fopen(out_path.c_str(), "w")) {
    std::fputs(out, f);
    std::fclose(f);
  } else {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    rc = 1;
  }
  td_string_free(out);
  return rc;
}

int cmd_config(const std::string& config_path) {
  td_config* cfg = nullptr;
  td_status st = td_config_load(config_path.c_str(), &cfg);
  if (st != TD_OK) return fail_with(st);
  char* js = nullptr;
  uint64_t hash = 0;
  st = td_config_serialize(cfg, &js);
  if (st == TD_OK) st = td_config_hash(cfg, &hash);
  td_config_free(cfg);
  if (st != TD_OK) return fail_with(st);
  std::fputs(js, stdout);
  std::printf("\nhash: %016llx\n", static_cast<unsigned long long>(hash));
  td_string_free(js);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torus dust simulator"};
  app.require_subcommand(1);

  std::string config_path, resume_path, suite = "all", input, quantities, out_path;
  int criterion = 0;

  CLI::App* run = app.add_subcommand("run", "execute a batch run from a config file");
  run->add_option("config", config_path, "config JSON path")->required();
  run->add_option("--resume", resume_path, "checkpoint file to continue from");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite,
                     "background, identities, convergence, oracle, decay, stability, all");
  verify->add_option("--criterion", criterion, "run one criterion by id (1-9)");

  CLI::App* plot = app.add_subcommand("plotdata", "extract long-form series from a run");
  plot->add_option("input", input, "diagnostics CSV or run directory")->required();
  plot->add_option("--quantities", quantities, "comma-separated column names")->required();
  plot->add_option("-o,--output", out_path, "write here instead of stdout");

  CLI::App* config = app.add_subcommand("config", "canonicalize a config and print its hash");
  config->add_option("config", config_path, "config JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, resume_path);
  if (verify->parsed()) return cmd_verify(suite, criterion);
  if (plot->parsed()) return cmd_plotdata(input, quantities, out_path);
  return cmd_config(config_path);
}
