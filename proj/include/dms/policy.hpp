#pragma once

#include <string>
#include <variant>

#include <json.hpp>

namespace dms {

/// Dual-index rule: raise the fast inventory position to base_fast, then the
/// slow position to base_fast + delta. delta = 0 ships everything fast.
struct DualIndex {
    long long base_fast = 0;
    long long delta = 0;  // slow base-stock minus fast base-stock, >= 0
    bool operator==(const DualIndex&) const = default;
};

/// Single base-stock on the fast mode only.
struct FastOnly {
    long long base = 0;
    bool operator==(const FastOnly&) const = default;
};

/// Single base-stock on the slow mode only (the fast base-stock pushed to
/// minus infinity).
struct SlowOnly {
    long long base = 0;
    bool operator==(const SlowOnly&) const = default;
};

using Policy = std::variant<DualIndex, FastOnly, SlowOnly>;

std::string describe(const Policy& p);
nlohmann::json policy_to_json(const Policy& p);
Policy policy_from_json(const nlohmann::json& j);

}  // namespace dms
