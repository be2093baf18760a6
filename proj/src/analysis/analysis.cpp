#include "fm/analysis.hpp"

namespace fm {

std::map<std::string, Ratio> commonality(const Count& product_count, const std::map<std::string, Count>& feature_count) {
    if (product_count == 0)
        throw EmptyProductLine();
    std::map<std::string, Ratio> out;
    for (const auto& [name, count] : feature_count) {
        Ratio r(count, product_count);
        r.canonicalize();
        out.emplace(name, std::move(r));
    }
    return out;
}

Ratio homogeneity(const FeatureTree& tree, const Count& product_count,
                  const std::map<std::string, Count>& feature_count) {
    if (product_count == 0)
        throw EmptyProductLine();
    std::size_t terminals = 0;
    std::size_t unique = 0;
    for (const auto& node : tree.nodes) {
        if (!node.is_leaf())
            continue;
        ++terminals;
        auto it = feature_count.find(node.name);
        if (it == feature_count.end())
            throw Error("no count for feature '" + node.name + "'");
        if (it->second == 1)
            ++unique;
    }
    if (terminals == 0)
        throw InternalError("tree without leaves");
    Ratio r(static_cast<unsigned long>(unique), static_cast<unsigned long>(terminals));
    r.canonicalize();
    return Ratio(1) - r;
}

AnalysisReport analyze(const FeatureTree& tree, const EngineOptions& options) {
    require_valid(tree);
    EngineOptions opts = options;
    opts.feature_counts = true;
    const auto result = run_engine(tree, constraint_clauses(tree), opts);

    AnalysisReport report;
    report.product_count = result.product_count;
    for (std::size_t i = 0; i < tree.size(); ++i) {
        report.feature_count.emplace(tree.nodes[i].name, result.feature_counts[i]);
        if (tree.nodes[i].is_leaf())
            ++report.total_terminals;
    }
    if (report.empty())
        return report;

    report.commonality = commonality(report.product_count, report.feature_count);
    report.homogeneity = homogeneity(tree, report.product_count, report.feature_count);
    for (const auto& [name, count] : report.feature_count) {
        if (count == report.product_count)
            report.core_features.insert(name);
        if (count == 0)
            report.dead_features.insert(name);
    }
    for (const auto& node : tree.nodes)
        if (node.is_leaf() && report.feature_count.at(node.name) == 1)
            report.unique_features.insert(node.name);
    return report;
}

std::string to_decimal(const Ratio& r, unsigned places) {
    Count scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    const Count num = r.get_num() * scale;
    const Count& den = r.get_den();

    Count q;
    Count rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const int half = cmp(Count(rem * 2), den);
    if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t())))
        q += 1;

    const bool negative = q < 0;
    std::string digits = Count(abs(q)).get_str();
    if (places > 0) {
        if (digits.size() <= places)
            digits.insert(0, places + 1 - digits.size(), '0');
        digits.insert(digits.size() - places, 1, '.');
    }
    return negative ? "-" + digits : digits;
}

} // namespace fm
