#pragma once

#include <string>
#include <vector>

namespace separatrix {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;
};

struct SuiteReport {
    std::string suite;
    unsigned seed = 0;
    std::vector<PropertyResult> properties;
    bool ok() const {
        for (const auto& p : properties)
            if (p.failures) return false;
        return true;
    }
};

/// Randomized exact property suites: "algebra" (quasi-homogeneous brackets and products)
/// and "eta" (eta0/eta1 reduction and derivation).
SuiteReport run_suite(const std::string& suite, int cases, unsigned seed);
std::vector<std::string> suite_names();

}  // namespace separatrix
