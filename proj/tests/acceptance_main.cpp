#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "polydet/acceptance.hpp"

int main(int argc, char** argv) {
  polydet::Suite suite = polydet::Suite::Full;
  if (argc > 1 && std::strcmp(argv[1], "--quick") == 0) suite = polydet::Suite::Quick;
  const auto results = polydet::run_acceptance(suite, {}, [](const polydet::CriterionResult& r) {
    std::printf("%s\n", polydet::format_result(r).c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
