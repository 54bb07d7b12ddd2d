// Release gate: every numbered check at full strength, one line each.
// Exit code 0 only when all pass.

#include <cstdio>

#include "spinor/validate.hpp"

int main() {
    spinor::ValidationOptions o;  // full draw counts
    const std::vector<spinor::CriterionResult> results = spinor::run_all_criteria(o);
    bool all = true;
    for (const spinor::CriterionResult& r : results) {
        all = all && r.passed;
        std::printf("%s %2d  %-52s %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str());
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed"
                            : "acceptance: CRITERIA FAILED");
    return all ? 0 : 1;
}
