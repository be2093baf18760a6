#include "fm/parse.hpp"

#include <map>

#include "json.hpp"

#include "fm/normalize.hpp"

namespace fm {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct RawModel {
    std::vector<Node> nodes;
    NodeId root;
    std::vector<Formula> constraints;
};

[[noreturn]] void schema(const std::string& message) { throw SchemaError("schema violation: " + message); }

unsigned natural_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        schema(where + ": missing '" + key + "'");
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() > 1'000'000)
        schema(where + ": '" + key + "' must be a natural number");
    return it->get<unsigned>();
}

RawModel read_raw(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        schema("document must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "root" && key != "features" && key != "constraints")
            schema("unknown key '" + key + "'");
    if (!doc.contains("root") || !doc["root"].is_string())
        schema("'root' must be a string");
    if (!doc.contains("features") || !doc["features"].is_array())
        schema("'features' must be an array");

    RawModel raw;
    std::map<std::string, NodeId> ids;
    const auto& features = doc["features"];
    for (const auto& f : features) {
        if (!f.is_object() || !f.contains("name") || !f["name"].is_string())
            schema("every feature needs a string 'name'");
        auto name = f["name"].get<std::string>();
        if (!ids.emplace(name, node_id(raw.nodes.size())).second)
            schema("duplicate feature name '" + name + "'");
        raw.nodes.push_back(Node{name, {}, std::nullopt});
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& f = features[i];
        const std::string where = "feature '" + raw.nodes[i].name + "'";
        for (const auto& [key, _] : f.items())
            if (key != "name" && key != "card" && key != "children")
                schema(where + ": unknown key '" + key + "'");
        if (auto it = f.find("card"); it != f.end()) {
            if (!it->is_object())
                schema(where + ": 'card' must be an object");
            raw.nodes[i].card = Cardinality{natural_field(*it, "low", where), natural_field(*it, "high", where)};
        }
        if (auto it = f.find("children"); it != f.end()) {
            if (!it->is_array())
                schema(where + ": 'children' must be an array");
            for (const auto& c : *it) {
                if (!c.is_string())
                    schema(where + ": child names must be strings");
                auto found = ids.find(c.get<std::string>());
                if (found == ids.end())
                    schema(where + ": unknown child '" + c.get<std::string>() + "'");
                raw.nodes[i].children.push_back(found->second);
            }
        }
    }
    auto root = ids.find(doc["root"].get<std::string>());
    if (root == ids.end())
        schema("root '" + doc["root"].get<std::string>() + "' is not a listed feature");
    raw.root = root->second;

    if (auto it = doc.find("constraints"); it != doc.end()) {
        if (!it->is_array())
            schema("'constraints' must be an array");
        for (const auto& c : *it) {
            if (!c.is_string())
                schema("constraints must be formula strings");
            try {
                raw.constraints.push_back(parse_formula(c.get<std::string>()));
            } catch (const ParseError& e) {
                schema("constraint '" + c.get<std::string>() + "': " + e.what());
            }
        }
    }
    return raw;
}

ordered_json feature_json(const Node& node, const std::vector<Node>& nodes) {
    ordered_json f;
    f["name"] = node.name;
    if (node.card) {
        ordered_json card;
        card["low"] = node.card->low;
        card["high"] = node.card->high;
        f["card"] = std::move(card);
    }
    if (!node.children.empty()) {
        auto children = ordered_json::array();
        for (NodeId c : node.children)
            children.push_back(nodes[c.index()].name);
        f["children"] = std::move(children);
    }
    return f;
}

} // namespace

std::string emit_json(const FeatureTree& tree, int indent) {
    ordered_json doc;
    doc["root"] = tree.name(tree.root);
    auto features = ordered_json::array();
    for (NodeId id : preorder(tree))
        features.push_back(feature_json(tree.node(id), tree.nodes));
    doc["features"] = std::move(features);
    auto constraints = ordered_json::array();
    for (const auto& c : tree.constraints)
        constraints.push_back(format_formula(c));
    doc["constraints"] = std::move(constraints);
    return doc.dump(indent);
}

FeatureTree read_json(std::string_view text) {
    RawModel raw = read_raw(text);
    FeatureTree tree{std::move(raw.nodes), raw.root, std::move(raw.constraints)};
    require_valid(tree);
    return tree;
}

FeatureGraph read_graph_json(std::string_view text) {
    RawModel raw = read_raw(text);
    FeatureGraph graph{std::move(raw.nodes), raw.root, std::move(raw.constraints)};
    auto report = validate_graph(graph);
    if (!report.empty())
        throw ValidationError(std::move(report));
    return graph;
}

std::string emit_graph_json(const FeatureGraph& graph, int indent) {
    ordered_json doc;
    doc["root"] = graph.nodes.at(graph.root.index()).name;
    auto features = ordered_json::array();
    for (const auto& node : graph.nodes)
        features.push_back(feature_json(node, graph.nodes));
    doc["features"] = std::move(features);
    auto constraints = ordered_json::array();
    for (const auto& c : graph.constraints)
        constraints.push_back(format_formula(c));
    doc["constraints"] = std::move(constraints);
    return doc.dump(indent);
}

} // namespace fm
