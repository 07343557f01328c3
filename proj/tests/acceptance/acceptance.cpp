// One line per acceptance criterion; exit status 0 iff every criterion passes
// within its time budget.

#include <iostream>

#include "cubewaring/verify.hpp"

int main() {
  using namespace cubewaring;
  int failed = 0;
  for (const auto& c : verify::criteria()) {
    const auto r = verify::run(c);
    verify::print_line(std::cout, r);
    std::cout.flush();
    failed += r.ok() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
