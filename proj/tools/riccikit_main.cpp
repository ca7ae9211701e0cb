// Command-line driver for the riccikit shared library.  Talks to the engine
// exclusively through the C interface in riccikit.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riccikit.h"

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::string metric;
  std::uint64_t seed = 0;
  int samples = 0;
  double four_pi_g = 0.0;
  bool table = false;
};

int fail_usage(rk_status st) {
  std::fprintf(stderr, "error: %s [%s]\n", rk_last_error(), rk_status_name(st));
  return 2;
}

int run_one(const std::string& command, CLI::App* sub, const Options& opt) {
  struct ConfigGuard {
    rk_config* ptr;
    ~ConfigGuard() { rk_config_destroy(ptr); }
  } cfg{rk_config_create()};
  if (!cfg.ptr) {
    std::fprintf(stderr, "error: out of memory\n");
    return 2;
  }

  if (sub->count("--config"))
    if (rk_status st = rk_config_load_file(cfg.ptr, opt.config_path.c_str()); st != RK_OK)
      return fail_usage(st);
  if (sub->count("--metric"))
    if (rk_status st = rk_config_set_metric(cfg.ptr, opt.metric.c_str()); st != RK_OK)
      return fail_usage(st);
  if (sub->count("--seed"))
    if (rk_status st = rk_config_set_seed(cfg.ptr, opt.seed); st != RK_OK) return fail_usage(st);
  if (sub->count("--samples"))
    if (rk_status st = rk_config_set_samples(cfg.ptr, opt.samples); st != RK_OK)
      return fail_usage(st);
  if (sub->count("--fourpiG"))
    if (rk_status st = rk_config_set_coupling(cfg.ptr, opt.four_pi_g); st != RK_OK)
      return fail_usage(st);

  rk_report* rep = nullptr;
  if (rk_status st = rk_run(cfg.ptr, command.c_str(), &rep); st != RK_OK) return fail_usage(st);
  struct ReportGuard {
    rk_report* ptr;
    ~ReportGuard() { rk_report_destroy(ptr); }
  } guard{rep};

  std::fputs(opt.table ? rk_report_table(rep) : rk_report_json(rep), stdout);

  if (sub->count("--out")) {
    std::ofstream out(opt.out_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot open \"%s\" for writing\n", opt.out_path.c_str());
      return 2;
    }
    out << rk_report_json(rep);
    if (!out.good()) {
      std::fprintf(stderr, "error: failed writing \"%s\"\n", opt.out_path.c_str());
      return 2;
    }
  }

  return rk_report_pass(rep) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification suite for semi-Riemannian curvature, conformal\n"
               "rescalings, transport-compatible fields, and geodesic blow-up."};
  app.set_version_flag("--version", std::string(rk_version()));
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"curvature", "Structural curvature checks (symmetries, Bianchi, traces, flatness)"},
      {"conformal", "Connection-difference and Ricci-difference identity chain"},
      {"atp", "Transport-compatible field checks, scale recovery, obstructions"},
      {"flow", "Geodesic, pregeodesic, and scalar-ODE blow-up runs"},
      {"report-all", "Full acceptance suite in one deterministic report"},
  };

  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", opt.config_path, "JSON configuration file");
    sub->add_option("--seed", opt.seed, "Sampling seed override");
    sub->add_option("--samples", opt.samples, "Sample-count override");
    sub->add_option("--out", opt.out_path, "Also write the JSON report to this file");
    sub->add_option("--metric", opt.metric,
                    "Builtin metric (minkowski2 minkowski3 minkowski4 hyperbolic_polar2 "
                    "cone3 sphere3 schwarzschild)");
    sub->add_option("--fourpiG", opt.four_pi_g, "Coupling constant in the energy tensor");
    sub->add_flag("--table", opt.table, "Print a human-readable table instead of JSON");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) return run_one(commands[i].first, subs[i], opt);
  return 2;  // unreachable: require_subcommand(1)
}
