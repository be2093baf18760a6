#ifndef FM_ORACLE_HPP
#define FM_ORACLE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fm/core.hpp"
#include "fm/engine.hpp"
#include "fm/normalize.hpp"

namespace fm {

/// A set of member nodes.
using Configuration = std::set<NodeId>;

class OracleLimitExceeded : public Error {
public:
    OracleLimitExceeded(std::size_t nodes, std::size_t limit);
    std::size_t nodes() const { return nodes_; }
    std::size_t limit() const { return limit_; }

private:
    std::size_t nodes_;
    std::size_t limit_;
};

/// Hard ceiling on node_limit: subsets are enumerated as 32-bit masks.
inline constexpr std::size_t max_oracle_nodes = 30;

struct OracleOptions {
    std::size_t node_limit = 22;
    Execution execution = Execution::Serial;
    /// Fill OracleResult::product_list.
    bool collect_products = false;
};

struct OracleResult {
    Count configuration_count;
    /// Distinct sets of member leaves.
    Count product_count;
    /// Configurations containing each node, by node id.
    std::vector<Count> per_node_count;
    /// Sorted leaf-name sets, sorted; present when requested.
    std::optional<std::vector<std::set<std::string>>> product_list;
};

/// The root is a member, every other member's parent is a member, every
/// internal member has between low and high member children, and every
/// constraint formula holds with member nodes true.
bool is_valid(const FeatureTree& tree, const std::vector<Formula>& constraints, const Configuration& c);
bool is_valid(const FeatureTree& tree, const ClauseSet& clauses, const Configuration& c);

/// Every subset of nodes containing the root, checked against the tree's
/// constraint formulas. Throws OracleLimitExceeded above node_limit.
OracleResult enumerate(const FeatureTree& tree, const OracleOptions& options = {});

/// As enumerate(), for a graph whose members require all of their parents.
OracleResult enumerate_graph(const FeatureGraph& graph, const OracleOptions& options = {});

} // namespace fm

#endif // FM_ORACLE_HPP
