#pragma once

#include <string>
#include <vector>

#include "synchart/record.hpp"

namespace synchart {

struct Violation {
    std::string code;  // e.g. QA_COUNT_LOW
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(const std::string& code) const;
    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Every violated record invariant; pure and non-throwing.
///
/// Codes: ENGINE_INCOMPATIBLE, DIMS_CONSTRAINT, DIMS_MISMATCH, TREND_COUNT,
/// TREND_UNKNOWN, TREND_INAPPLICABLE, TABLE_INVALID, CSV_ROUNDTRIP,
/// CODE_LINT, DESCRIPTION_MISSING, QA_COUNT_LOW, QA_COUNT_HIGH,
/// COMPLEX_COUNT_LOW, COMPLEX_COUNT_HIGH, QA_KIND, SIMPLE_ANSWER_LONG,
/// REASONING_SHORT, REASONING_WORDING, QA_DUPLICATE, QA_VERIFY_FAILED,
/// IMAGE_META, RECORD_ID.
ValidationReport validate_record(const DatasetRecord& record);

}  // namespace synchart
