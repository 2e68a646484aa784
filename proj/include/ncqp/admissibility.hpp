#pragma once

#include "ncqp/filters.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncqp {

/// Numeric outcome of one admissibility condition. The margin is the
/// worst-case quantity the pass/fail decision was based on.
struct ConditionCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct AdmissibilityReport {
    nlohmann::json filter;
    std::vector<ConditionCheck> conditions; // C1..C6
    std::optional<ConditionCheck> askey;    // analytic family only

    [[nodiscard]] const ConditionCheck& condition(int index) const { return conditions.at(index - 1); }
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Checks Conditions 1-6 numerically, plus the Askey third-derivative
/// inequality for the analytic family. Failures are reported, not thrown.
AdmissibilityReport certify_filter(const FilterSpec& spec);

/// log of the squared L2 norm of Omega_w(beta) e^{|beta|^2/2}; +infinity when it diverges.
double log_condition1_norm(const FilterSpec& spec);

/// Minimum over b of the central finite-difference -d^3 Omega / db^3
/// (step 1e-4 w, guard band [0, 2 step)), scanned on [2 step, b_end].
double askey_min_third_derivative(const FilterSpec& spec, double b_end);

} // namespace ncqp
