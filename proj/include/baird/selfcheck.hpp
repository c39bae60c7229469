#pragma once

#include <string>
#include <vector>

namespace baird {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Quick invariant suite over the environment, update rules and lenses
// (a few seconds at most). Backs the `selfcheck` CLI verb.
std::vector<CheckResult> run_selfcheck(unsigned long long seed = 12345);

}  // namespace baird
