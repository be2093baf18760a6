#ifndef FM_ECON_HPP
#define FM_ECON_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fm/analysis.hpp"
#include "fm/core.hpp"

namespace fm {

/// Exact decimal amount with up to four fractional digits.
class Money {
public:
    static constexpr unsigned scale_digits = 4;

    Money() = default;
    /// "12", "12.5", "-0.0001". Throws Error on anything else, including
    /// more than four fractional digits.
    static Money parse(std::string_view text);
    static Money from_units(Count units) { return Money(std::move(units)); }

    const Count& units() const { return units_; }
    /// Shortest exact decimal text ("330", "12.5").
    std::string str() const;

    Money& operator+=(const Money& o) {
        units_ += o.units_;
        return *this;
    }
    friend Money operator+(Money a, const Money& b) { return a += b; }
    friend Money operator*(Money a, const Count& k) { return Money(a.units_ * k); }
    friend bool operator==(const Money& a, const Money& b) { return a.units_ == b.units_; }
    friend bool operator<(const Money& a, const Money& b) { return a.units_ < b.units_; }

private:
    explicit Money(Count units) : units_(std::move(units)) {}
    Count units_ = 0;
};

struct ProductCost {
    Money c_unique;
    Money c_reuse;
};

/// Either explicit per-product costs or `count` products at a uniform cost.
struct UniformCost {
    Count count;
    ProductCost cost;
};

struct CostModel {
    std::string currency;
    Money c_org;
    Money c_cab;
    std::vector<ProductCost> products;
    std::optional<UniformCost> uniform;

    Count declared_products() const;
};

/// Reads `{currency, c_org, c_cab, products:[{c_unique, c_reuse}] | uniform:{count, c_unique, c_reuse}}`.
/// Amounts may be JSON numbers or decimal strings; negatives are rejected.
/// Throws Error on schema violations.
CostModel read_cost_model(std::string_view json_text);

/// C_org + C_cab + sum over products of (C_unique + C_reuse).
Money spl_cost(const CostModel& m);

struct EconReport {
    std::string currency;
    Money spl_cost;
    Count counted_products;
    Count declared_products;
    Ratio homogeneity;
    std::map<std::string, Ratio> commonality;
    std::optional<std::string> warning;
};

/// Throws EmptyProductLine when the analysis found no products.
EconReport econ_report(const AnalysisReport& analysis, const CostModel& m);

} // namespace fm

#endif // FM_ECON_HPP
