#include <cstdio>

#include "coneasym/acceptance.hpp"

int main() {
  int failed = 0;
  coneasym::run_acceptance([&failed](const coneasym::CriterionResult& r) {
    std::printf("%s\n", coneasym::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d of 10 acceptance criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
