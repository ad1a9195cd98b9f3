// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <cstdio>

#include "merw/acceptance.hpp"

int main() {
  auto results = merw::acceptance::run();
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s\n", merw::acceptance::format_line(r).c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES above");
  return all ? 0 : 1;
}
