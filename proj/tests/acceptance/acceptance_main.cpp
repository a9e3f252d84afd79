#include <cstdlib>
#include <iostream>

#include "hplab/acceptance.hpp"
#include "hplab/cli.hpp"

int main() {
  hplab::AcceptanceOptions opts;
  opts.seed = hplab::kDefaultSeed;
  if (const char* s = std::getenv("HPLAB_SEED")) opts.seed = std::strtoull(s, nullptr, 10);
  int failed = 0;
  for (const auto& r : hplab::run_acceptance(opts)) {
    std::cout << hplab::format_result(r) << "\n";
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
