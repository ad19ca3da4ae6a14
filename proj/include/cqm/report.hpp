#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace cqm {

/// One located counterexample inside a verification report.
struct Failure {
    std::string kind;
    std::string location;
    std::string detail;

    friend auto operator<=>(const Failure&, const Failure&) = default;
};

/// Outcome of a verification pass. Failures are content, not errors.
struct VerificationReport {
    bool pass = true;
    std::size_t checked = 0;
    std::vector<Failure> failures;
    nlohmann::json details = nlohmann::json::object();

    void fail(std::string kind, std::string location, std::string detail = {}) {
        pass = false;
        failures.push_back({std::move(kind), std::move(location), std::move(detail)});
    }

    /// Sort failures so that reports merged from parallel workers are byte-stable.
    void finalize();

    void merge(const VerificationReport& other);
};

nlohmann::json to_json(const VerificationReport& report);

}  // namespace cqm
