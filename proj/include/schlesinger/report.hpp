#pragma once

#include <string>
#include <vector>

namespace schlesinger {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Ordered list of named residual checks; overall pass is the conjunction.
class VerificationReport {
public:
    /// Records `residual <= tolerance` (NaN fails).
    const CheckResult& add(std::string name, double residual, double tolerance);
    /// Records a check whose verdict is not a residual comparison.
    const CheckResult& add_flag(std::string name, bool passed, double residual = 0.0, double tolerance = 0.0);
    void append(const VerificationReport& other, const std::string& prefix = {});

    [[nodiscard]] const std::vector<CheckResult>& checks() const noexcept { return checks_; }
    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] const CheckResult* find(const std::string& name) const noexcept;
    /// Names of failing checks, in insertion order.
    [[nodiscard]] std::vector<std::string> failures() const;

private:
    std::vector<CheckResult> checks_;
};

}  // namespace schlesinger
