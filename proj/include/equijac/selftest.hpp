#pragma once

// Self-check registry: one small deterministic check per documented example
// of every module, runnable from the CLI and from the acceptance suite.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace equijac {

struct SelfCheck {
    std::string module;
    std::string name;
    // Returns pass/fail; may append detail text to the message.
    std::function<bool(std::string& detail)> fn;
};

const std::vector<SelfCheck>& selftest_registry();

struct SelfTestSummary {
    int passed = 0;
    int failed = 0;
    std::vector<std::string> failures;
};

SelfTestSummary run_selftest(std::ostream& out);

}  // namespace equijac
