// Acceptance suite: one pass/fail line per criterion.
//   sedlab_acceptance                 all criteria
//   sedlab_acceptance --criterion 3   a single criterion
//   --jobs N                          worker threads (default SEDLAB_JOBS)

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "sedlab/acceptance.hpp"
#include "sedlab/ensemble.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  unsigned jobs = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) {
      jobs = static_cast<unsigned>(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]... [--jobs N]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true;
  for (const auto& r : sedlab::acceptance::run_all(sedlab::resolve_jobs(jobs), ids)) {
    std::printf("%s\n", r.line().c_str());
    ok = ok && r.pass();
  }
  return ok ? 0 : 1;
}
