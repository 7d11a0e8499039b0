#include <CLI11.hpp>

#include <cstdio>

#include "vlcqos/validation/acceptance.hpp"

int main(int argc, char** argv) {
  vlcqos::validation::AcceptanceOptions opts;
  CLI::App app{"Runs the acceptance criteria and prints one line per criterion."};
  app.add_option("--seed", opts.seed, "Base seed for random tuples and simulations");
  app.add_option("--frames", opts.sim_frames, "Post-warmup frames per simulation")
      ->check(CLI::PositiveNumber);
  app.add_option("--only", opts.only, "Criterion ids to run")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  vlcqos::validation::run_acceptance(opts, [&](const auto& r) {
    std::printf("%s\n", vlcqos::validation::format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 2;
}
