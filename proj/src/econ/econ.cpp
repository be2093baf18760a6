#include "fm/econ.hpp"

#include <cctype>

#include "json.hpp"

namespace fm {

Money Money::parse(std::string_view text) {
    auto fail = [&]() -> Money { throw Error("invalid amount '" + std::string(text) + "'"); };
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() || (dot != std::string_view::npos && frac.empty()))
        return fail();
    auto digits = [](std::string_view d) {
        for (char ch : d)
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                return false;
        return true;
    };
    if (!digits(whole) || !digits(frac))
        return fail();
    while (!frac.empty() && frac.back() == '0')
        frac.remove_suffix(1);
    if (frac.size() > scale_digits)
        throw Error("amount '" + std::string(text) + "' has more than " + std::to_string(scale_digits) +
                    " decimal places");
    std::string units(whole);
    units += frac;
    units.append(scale_digits - frac.size(), '0');
    Count value(units, 10);
    return Money(negative ? Count(-value) : value);
}

std::string Money::str() const {
    std::string digits = Count(abs(units_)).get_str();
    if (digits.size() <= scale_digits)
        digits.insert(0, scale_digits + 1 - digits.size(), '0');
    std::string whole = digits.substr(0, digits.size() - scale_digits);
    std::string frac = digits.substr(digits.size() - scale_digits);
    while (!frac.empty() && frac.back() == '0')
        frac.pop_back();
    std::string out = units_ < 0 ? "-" + whole : whole;
    return frac.empty() ? out : out + "." + frac;
}

Count CostModel::declared_products() const {
    return uniform ? uniform->count : Count(static_cast<unsigned long>(products.size()));
}

namespace {

using nlohmann::json;

Money amount(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw Error(std::string("cost model: missing '") + key + "'");
    Money m;
    if (it->is_string())
        m = Money::parse(it->get<std::string>());
    else if (it->is_number())
        m = Money::parse(it->dump());
    else
        throw Error(std::string("cost model: '") + key + "' must be a number or decimal string");
    if (m.units() < 0)
        throw Error(std::string("cost model: '") + key + "' is negative");
    return m;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
    if (!obj.is_object())
        throw Error(std::string("cost model: ") + where + " must be an object");
    for (const auto& [k, v] : obj.items()) {
        bool known = false;
        for (const char* key : keys)
            known = known || k == key;
        if (!known)
            throw Error(std::string("cost model: unknown key '") + k + "' in " + where);
    }
}

ProductCost product_cost(const json& obj) {
    return {amount(obj, "c_unique"), amount(obj, "c_reuse")};
}

} // namespace

CostModel read_cost_model(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("cost model: ") + e.what());
    }
    only_keys(doc, {"currency", "c_org", "c_cab", "products", "uniform"}, "cost model");
    CostModel m;
    if (auto it = doc.find("currency"); it != doc.end()) {
        if (!it->is_string())
            throw Error("cost model: 'currency' must be a string");
        m.currency = it->get<std::string>();
    }
    m.c_org = amount(doc, "c_org");
    m.c_cab = amount(doc, "c_cab");
    const bool has_products = doc.contains("products");
    const bool has_uniform = doc.contains("uniform");
    if (has_products && has_uniform)
        throw Error("cost model: 'products' and 'uniform' are mutually exclusive");
    if (has_products) {
        const auto& list = doc["products"];
        if (!list.is_array())
            throw Error("cost model: 'products' must be an array");
        for (const auto& p : list) {
            only_keys(p, {"c_unique", "c_reuse"}, "product");
            m.products.push_back(product_cost(p));
        }
    }
    if (has_uniform) {
        const auto& u = doc["uniform"];
        only_keys(u, {"count", "c_unique", "c_reuse"}, "uniform");
        auto c = u.find("count");
        Count count;
        if (c != u.end() && c->is_number_unsigned())
            count = Count(c->dump(), 10);
        else if (c != u.end() && c->is_string() && !c->get<std::string>().empty() &&
                 c->get<std::string>().find_first_not_of("0123456789") == std::string::npos)
            count = Count(c->get<std::string>(), 10);
        else
            throw Error("cost model: 'uniform.count' must be a nonnegative integer");
        m.uniform = UniformCost{count, product_cost(u)};
    }
    return m;
}

Money spl_cost(const CostModel& m) {
    Money total = m.c_org + m.c_cab;
    for (const auto& p : m.products)
        total += p.c_unique + p.c_reuse;
    if (m.uniform)
        total += (m.uniform->cost.c_unique + m.uniform->cost.c_reuse) * m.uniform->count;
    return total;
}

EconReport econ_report(const AnalysisReport& analysis, const CostModel& m) {
    if (analysis.empty() || !analysis.homogeneity)
        throw EmptyProductLine();
    EconReport r;
    r.currency = m.currency;
    r.spl_cost = spl_cost(m);
    r.counted_products = analysis.product_count;
    r.declared_products = m.declared_products();
    r.homogeneity = *analysis.homogeneity;
    r.commonality = analysis.commonality;
    if (r.declared_products != r.counted_products)
        r.warning = "declared products (" + r.declared_products.get_str() + ") ≠ counted products (" +
                    r.counted_products.get_str() + ")";
    return r;
}

} // namespace fm
