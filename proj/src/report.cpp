#include "schlesinger/report.hpp"

#include <algorithm>

namespace schlesinger {

const CheckResult& VerificationReport::add(std::string name, double residual, double tolerance) {
    checks_.push_back({std::move(name), residual, tolerance, residual <= tolerance});
    return checks_.back();
}

const CheckResult& VerificationReport::add_flag(std::string name, bool passed, double residual, double tolerance) {
    checks_.push_back({std::move(name), residual, tolerance, passed});
    return checks_.back();
}

void VerificationReport::append(const VerificationReport& other, const std::string& prefix) {
    for (auto c : other.checks_) {
        c.name = prefix + c.name;
        checks_.push_back(std::move(c));
    }
}

bool VerificationReport::passed() const noexcept {
    return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(const std::string& name) const noexcept {
    auto it = std::find_if(checks_.begin(), checks_.end(), [&](const CheckResult& c) { return c.name == name; });
    return it == checks_.end() ? nullptr : &*it;
}

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks_)
        if (!c.passed) out.push_back(c.name);
    return out;
}

}  // namespace schlesinger
