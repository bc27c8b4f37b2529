// Prints one line per acceptance criterion; exits nonzero if any fails.
#include <cstdio>

#include "sievelab/acceptance.hpp"

int main() {
  const std::size_t threads = sievelab::default_threads();
  int failed = 0;
  for (const auto& r : sievelab::acceptance::run_all(threads)) {
    std::printf("%s\n", sievelab::acceptance::format_line(r).c_str());
    for (const auto& note : r.info) std::printf("  [INFO] %s\n", note.c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
