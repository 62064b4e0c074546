// Runs the acceptance criteria and prints one line per criterion.
#include <cstdio>
#include <cstring>

#include "rlab/acceptance.hpp"

int main(int argc, char** argv) {
  rlab::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      opt.quick = true;
    } else if (std::strcmp(argv[i], "--reference") == 0) {
      opt.backend = rlab::Backend::reference;
    } else {
      std::fprintf(stderr, "usage: %s [--quick] [--reference]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  rlab::run_acceptance(opt, [&](const rlab::CriterionResult& r) {
    std::printf("%s\n", rlab::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 4;
}
