#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tnls/harness.hpp"
#include "tnls/types.hpp"

using namespace tnls;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string seed;
  int threads = 0;
  std::vector<std::string> overrides;
};

int execute(const std::string& name, const Options& o) {
  auto cfg = o.config.empty() ? harness::Config::parse("", "<defaults>") : harness::Config::load(o.config);
  for (const auto& a : o.overrides) cfg.apply_override(a);
  if (!o.seed.empty()) cfg.set("seed", o.seed);
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
  auto report = harness::run(name, cfg, {o.out});
  if (o.out.empty()) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    report.write(o.out);
    for (const auto& c : report.checks)
      std::cerr << harness::to_string(c.status) << "  " << c.name << " = " << harness::format_number(c.value)
                << "  (" << c.requirement << ")\n";
    for (const auto& f : report.flags) std::cerr << "flag  " << f << "\n";
    std::cerr << report.experiment << ": " << (report.passed() ? "pass" : "fail") << ", report in " << o.out
              << "/report.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic-quintic NLS experiments on the three-torus"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  for (const auto& [name, runner] : harness::experiments()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", o.config, "key=value configuration file");
    sub->add_option("--out", o.out, "output directory (report.json, tables/, fields/); stdout JSON if absent");
    sub->add_option("--seed", o.seed, "seed for randomized data (sets key 'seed')");
    sub->add_option("--threads", o.threads, "OpenMP thread count")->check(CLI::NonNegativeNumber);
    sub->add_option("--override", o.overrides, "key=value, repeatable")->allow_extra_args(false)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sub->callback([&chosen, n = name] { chosen = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  try {
    return execute(chosen, o);
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
