#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "walldist/walldist.h"

namespace {

int load_exit(wd_status s) {
  if (s == WD_ERR_CONFIG_PARSE) return WD_RUN_CONFIG_ERROR;
  if (s == WD_ERR_IO) return WD_RUN_IO_ERROR;
  return WD_RUN_FAILED;
}

int fail(wd_status s, const char* what) {
  std::fprintf(stderr, "walldist: %s: %s (%s)\n", what, wd_last_error(), wd_status_string(s));
  return load_exit(s);
}

int do_run(const std::string& path, const std::string& out, const std::string& emit) {
  wd_config* cfg = nullptr;
  if (auto s = wd_config_load(path.c_str(), &cfg); s != WD_OK) return fail(s, "config");
  if (!emit.empty()) {
    if (auto s = wd_config_enable_outputs(cfg, emit.c_str()); s != WD_OK) {
      wd_config_free(cfg);
      return fail(s, "--emit");
    }
  }
  wd_result* r = nullptr;
  const auto s = wd_run(cfg, out.empty() ? nullptr : out.c_str(), &r);
  wd_config_free(cfg);
  if (s != WD_OK) return fail(s, "run");

  wd_summary sum{};
  wd_result_summary(r, &sum);
  const auto status = wd_result_status(r);
  std::printf("%s %s %s grid %s: iters %d, l2 %.4e, max |err| %.4f%%, %.4f s/100 iters\n", sum.case_name,
              sum.formulation, sum.scheme, sum.grid, sum.iters, sum.l2, sum.max_pct_err, sum.sec_per_100);
  std::printf("wrote %zu files to %s\n", wd_result_file_count(r), wd_result_dir(r));
  if (status != WD_RUN_CONVERGED) std::fprintf(stderr, "walldist: %s\n", wd_result_message(r));
  wd_result_free(r);
  return status;
}

int do_compare(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<wd_config*> cfgs;
  auto cleanup = [&] {
    for (auto* c : cfgs) wd_config_free(c);
  };
  for (const auto& p : paths) {
    wd_config* c = nullptr;
    if (auto s = wd_config_load(p.c_str(), &c); s != WD_OK) {
      cleanup();
      return fail(s, p.c_str());
    }
    cfgs.push_back(c);
  }
  std::vector<char> table(1 << 16);
  wd_run_status worst = WD_RUN_CONVERGED;
  const auto s = wd_compare(cfgs.data(), cfgs.size(), out.c_str(), table.data(), table.size(), &worst);
  cleanup();
  if (s != WD_OK) return fail(s, "compare");
  std::fputs(table.data(), stdout);
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wall-distance solver"};
  app.require_subcommand(1);

  std::string config, out, emit;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config,--config", config, "Config file");
  run->add_option("--out", out, "Output directory (overrides [output] dir)");
  run->add_option("--emit", emit, "Extra outputs: field,history,histogram,isolines,vtk");

  std::vector<std::string> configs;
  std::string cmp_out = "compare";
  auto* cmp = app.add_subcommand("compare", "Run configurations and tabulate them against the first");
  cmp->add_option("configs", configs, "Config files (two or more, same case)")->required();
  cmp->add_option("--out", cmp_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : WD_RUN_CONFIG_ERROR;
  }

  if (*run) {
    if (config.empty()) {
      std::fprintf(stderr, "walldist: run needs a config file\n");
      return WD_RUN_CONFIG_ERROR;
    }
    return do_run(config, out, emit);
  }
  return do_compare(configs, cmp_out);
}
