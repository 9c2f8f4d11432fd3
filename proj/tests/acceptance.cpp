// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any
// criterion fails.

#include <cstdio>

#include "criteria.hpp"

int main() {
  struct Item {
    const char* name;
    criteria::Result (*run)();
  };
  const Item items[] = {
      {"1 selector identities",
       [] { return criteria::selector_identities(1000, 20240601); }},
      {"2 s-composition algebra",
       [] { return criteria::algebra_laws(1000, 20240602); }},
      {"3 reducible signature counts", criteria::reducible_counts},
      {"4 affine systems vs dense solve, bracketing",
       [] { return criteria::affine_oracle(50, 5, 20240604); }},
      {"5 tripled contraction transfer",
       [] { return criteria::tripled_transfer(20, 500, 20240605); }},
      {"6 Green kernel row sums", criteria::kernel_row_sums},
      {"7 PBVS closed form and shooting oracle",
       criteria::pbvs_closed_form_and_shooting},
      {"8 seeded report determinism", criteria::report_determinism},
  };
  int failed = 0;
  for (const auto& item : items) {
    criteria::Result r;
    try {
      r = item.run();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %s: %s\n", r.passed ? "PASS" : "FAIL", item.name,
                r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(items)) - failed, std::size(items));
  return failed == 0 ? 0 : 1;
}
