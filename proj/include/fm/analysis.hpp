#ifndef FM_ANALYSIS_HPP
#define FM_ANALYSIS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "fm/core.hpp"
#include "fm/engine.hpp"

namespace fm {

/// Raised when a metric divides by a product count of zero.
class EmptyProductLine : public Error {
public:
    EmptyProductLine() : Error("There are no products in the spl") {}
};

/// Product count, per-feature counts and the metrics derived from them.
/// Maps are keyed by feature name so iteration is name-sorted.
struct AnalysisReport {
    Count product_count;
    std::map<std::string, Count> feature_count;
    /// Empty when the product line is empty.
    std::map<std::string, Ratio> commonality;
    std::optional<Ratio> homogeneity;
    std::set<std::string> core_features;
    std::set<std::string> dead_features;
    /// Leaves contained in exactly one configuration.
    std::set<std::string> unique_features;
    std::size_t total_terminals = 0;

    bool empty() const { return product_count == 0; }
};

/// Counts and metrics for a valid tree and its constraints.
AnalysisReport analyze(const FeatureTree& tree, const EngineOptions& options = {});

/// feature_count / product_count per feature. Throws EmptyProductLine.
std::map<std::string, Ratio> commonality(const Count& product_count, const std::map<std::string, Count>& feature_count);

/// 1 - |R_U| / |R_T| with R_T the leaves and R_U the leaves whose count is
/// exactly 1. Throws EmptyProductLine.
Ratio homogeneity(const FeatureTree& tree, const Count& product_count,
                  const std::map<std::string, Count>& feature_count);

/// Decimal text of r rounded half-to-even to `places` fractional digits.
std::string to_decimal(const Ratio& r, unsigned places);

} // namespace fm

#endif // FM_ANALYSIS_HPP
