#include "fm/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fm/analysis.hpp"
#include "fm/econ.hpp"
#include "fm/oracle.hpp"
#include "fm/parse.hpp"

namespace fm {
namespace {

using nlohmann::json;

struct RunConfig {
    std::string input;
    std::string costs;
    bool json_output = false;
    unsigned round = 6;
    std::size_t oracle_limit = OracleOptions{}.node_limit;
    std::size_t clause_warn = 64;
    bool parallel = false;
    bool allow_reserved = false;
    // normalize
    std::vector<std::string> splits;
    std::vector<std::string> primitives;
    bool dag = false;
    bool clauses = false;
};

/// Leaves the command with an exit code after its message has been printed.
struct Exit {
    int code;
};

std::string read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot read '" << path << "'\n";
        throw Exit{exit_input};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_json_path(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

std::string location(const std::string& path, const SourceSpan& span) {
    return path + ":" + std::to_string(span.line) + ":" + std::to_string(span.column);
}

void print_violations(const std::string& path, const ValidationReport& report, const ParsedModel* parsed,
                      std::ostream& err) {
    for (const auto& v : report) {
        if (parsed)
            err << location(path, parsed->locate(v)) << ": " << v.message << "\n";
        else
            err << path << ": " << v.message << "\n";
    }
}

FeatureTree load_tree(const RunConfig& cfg, std::ostream& err) {
    const std::string text = read_file(cfg.input, err);
    try {
        if (is_json_path(cfg.input))
            return read_json(text);
        auto parsed = parse_model_unchecked(text, {cfg.allow_reserved});
        auto report = validate(parsed.tree);
        if (!report.empty()) {
            print_violations(cfg.input, report, &parsed, err);
            throw Exit{exit_validation};
        }
        return std::move(parsed.tree);
    } catch (const ParseError& e) {
        err << location(cfg.input, e.span()) << ": " << e.message() << "\n";
        throw Exit{exit_input};
    } catch (const SchemaError& e) {
        err << cfg.input << ": " << e.what() << "\n";
        throw Exit{exit_input};
    } catch (const ValidationError& e) {
        print_violations(cfg.input, e.report(), nullptr, err);
        throw Exit{exit_validation};
    }
}

EngineOptions engine_options(const RunConfig& cfg) {
    EngineOptions o;
    o.execution = cfg.parallel ? Execution::Parallel : Execution::Serial;
    return o;
}

void warn_clauses(const FeatureTree& tree, const RunConfig& cfg, std::ostream& err) {
    const auto n = constraint_clauses(tree).size();
    if (n > cfg.clause_warn)
        err << "warning: constraints expand to " << n << " clauses\n";
}

json ratio_json(const Ratio& r, unsigned places) {
    return {{"ratio", r.get_str()}, {"decimal", to_decimal(r, places)}};
}

std::string ratio_text(const Ratio& r, unsigned places) {
    return r.get_str() + " ≈ " + to_decimal(r, places);
}

json analysis_json(const AnalysisReport& a, unsigned places) {
    json j;
    j["product_count"] = a.product_count.get_str();
    j["feature_count"] = json::object();
    for (const auto& [name, c] : a.feature_count)
        j["feature_count"][name] = c.get_str();
    j["commonality"] = json::object();
    for (const auto& [name, r] : a.commonality)
        j["commonality"][name] = ratio_json(r, places);
    j["homogeneity"] = a.homogeneity ? ratio_json(*a.homogeneity, places) : json(nullptr);
    j["core_features"] = a.core_features;
    j["dead_features"] = a.dead_features;
    j["unique_features"] = a.unique_features;
    j["total_terminals"] = a.total_terminals;
    return j;
}

AnalysisReport analyze_or_exit(const FeatureTree& tree, const RunConfig& cfg, std::ostream& err) {
    warn_clauses(tree, cfg, err);
    auto report = analyze(tree, engine_options(cfg));
    if (report.empty()) {
        err << EmptyProductLine().what() << "\n";
        throw Exit{exit_empty};
    }
    return report;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    if (cfg.json_output)
        out << json{{"valid", true}, {"features", tree.size()}, {"constraints", tree.constraints.size()}}.dump()
            << "\n";
    else
        out << "valid: " << tree.size() << " features, " << tree.constraints.size() << " constraints\n";
    return exit_ok;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

GroupKind group_kind(const std::string& word) {
    for (GroupKind k : {GroupKind::Mandatory, GroupKind::Optional, GroupKind::Or, GroupKind::Xor})
        if (to_string(k) == word)
            return k;
    throw Error("unknown group kind '" + word + "'");
}

/// "P:kind=a,b;kind=c"
FeatureTree apply_split(const FeatureTree& tree, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("--split expects PARENT:kind=a,b;kind=c, got '" + spec + "'");
    const NodeId parent = tree.id_of(spec.substr(0, colon));
    std::vector<GroupCell> cells;
    for (const auto& cell : split_list(spec.substr(colon + 1), ';')) {
        const auto eq = cell.find('=');
        if (eq == std::string::npos)
            throw Error("--split cell '" + cell + "' lacks '='");
        GroupCell g{{}, group_kind(cell.substr(0, eq))};
        for (const auto& name : split_list(cell.substr(eq + 1), ','))
            g.children.push_back(tree.id_of(name));
        cells.push_back(std::move(g));
    }
    return split_mixed_group(tree, parent, cells);
}

int cmd_normalize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    FeatureTree tree;
    if (cfg.dag) {
        const std::string text = read_file(cfg.input, err);
        try {
            tree = dag_to_tree(read_graph_json(text));
        } catch (const SchemaError& e) {
            err << cfg.input << ": " << e.what() << "\n";
            return exit_input;
        } catch (const ValidationError& e) {
            print_violations(cfg.input, e.report(), nullptr, err);
            return exit_validation;
        }
    } else {
        tree = load_tree(cfg, err);
    }
    for (const auto& spec : cfg.splits)
        tree = apply_split(tree, spec);
    if (!cfg.primitives.empty()) {
        MarkedTree marked{tree, {}};
        for (const auto& list : cfg.primitives)
            for (const auto& name : split_list(list, ','))
                marked.primitive.insert(tree.id_of(name));
        tree = primitive_to_leaf(marked).tree;
    }

    if (cfg.clauses) {
        const auto cnf = constraint_clauses(tree);
        if (cnf.size() > cfg.clause_warn)
            err << "warning: constraints expand to " << cnf.size() << " clauses\n";
        if (cfg.json_output) {
            json list = json::array();
            for (const auto& c : cnf.clauses)
                list.push_back(format_clause(c, tree));
            out << list.dump() << "\n";
        } else {
            for (std::size_t j = 0; j < cnf.clauses.size(); ++j)
                out << j + 1 << ": " << format_clause(cnf.clauses[j], tree) << "\n";
        }
        return exit_ok;
    }
    out << (cfg.json_output ? emit_json(tree, 2) + "\n" : emit_model(tree));
    return exit_ok;
}

int cmd_count(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    const auto report = analyze_or_exit(tree, cfg, err);
    if (cfg.json_output)
        out << analysis_json(report, cfg.round).dump() << "\n";
    else
        out << report.product_count.get_str() << "\n";
    return exit_ok;
}

int cmd_commonality(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    const auto report = analyze_or_exit(tree, cfg, err);
    if (cfg.json_output) {
        out << analysis_json(report, cfg.round).dump() << "\n";
        return exit_ok;
    }
    std::size_t width = 0;
    for (const auto& [name, r] : report.commonality)
        width = std::max(width, name.size());
    for (const auto& [name, r] : report.commonality)
        out << name << std::string(width - name.size() + 1, ' ') << ratio_text(r, cfg.round) << "\n";
    return exit_ok;
}

int cmd_homogeneity(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    const auto report = analyze_or_exit(tree, cfg, err);
    if (cfg.json_output)
        out << analysis_json(report, cfg.round).dump() << "\n";
    else
        out << ratio_text(*report.homogeneity, cfg.round) << "\n";
    return exit_ok;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    OracleOptions oo;
    oo.node_limit = cfg.oracle_limit;
    oo.execution = cfg.parallel ? Execution::Parallel : Execution::Serial;
    OracleResult oracle;
    try {
        oracle = enumerate(tree, oo);
    } catch (const OracleLimitExceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_oracle_limit;
    }
    const auto engine = run_engine(tree, constraint_clauses(tree), engine_options(cfg));

    bool agree = engine.product_count == oracle.configuration_count;
    std::vector<std::size_t> order(tree.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tree.nodes[a].name < tree.nodes[b].name; });
    for (std::size_t i : order)
        agree = agree && engine.feature_counts[i] == oracle.per_node_count[i];

    std::optional<std::string> note;
    if (oracle.product_count != oracle.configuration_count)
        note = "distinct products: " + oracle.product_count.get_str() +
               " < configurations: " + oracle.configuration_count.get_str();

    if (cfg.json_output) {
        json j;
        j["agree"] = agree;
        j["configurations"] = {{"engine", engine.product_count.get_str()},
                               {"oracle", oracle.configuration_count.get_str()}};
        j["distinct_products"] = oracle.product_count.get_str();
        j["features"] = json::object();
        for (std::size_t i : order)
            j["features"][tree.nodes[i].name] = {{"engine", engine.feature_counts[i].get_str()},
                                                 {"oracle", oracle.per_node_count[i].get_str()}};
        if (note)
            j["note"] = *note;
        out << j.dump() << "\n";
    } else {
        std::size_t width = std::string("configurations").size();
        for (const auto& n : tree.nodes)
            width = std::max(width, n.name.size());
        auto row = [&](const std::string& label, const Count& e, const Count& o) {
            out << label << std::string(width - label.size() + 1, ' ') << "engine " << e.get_str() << "  oracle "
                << o.get_str() << "  " << (e == o ? "ok" : "MISMATCH") << "\n";
        };
        row("configurations", engine.product_count, oracle.configuration_count);
        for (std::size_t i : order)
            row(tree.nodes[i].name, engine.feature_counts[i], oracle.per_node_count[i]);
        out << "distinct products: " << oracle.product_count.get_str() << "\n";
        if (note)
            out << "note: " << *note << "\n";
    }
    return agree ? exit_ok : exit_mismatch;
}

CostModel load_costs(const std::string& path, std::ostream& err) {
    const std::string text = read_file(path, err);
    try {
        return read_cost_model(text);
    } catch (const Error& e) {
        err << path << ": " << e.what() << "\n";
        throw Exit{exit_input};
    }
}

json econ_json(const EconReport& r, unsigned places) {
    json j;
    j["currency"] = r.currency;
    j["spl_cost"] = r.spl_cost.str();
    j["counted_products"] = r.counted_products.get_str();
    j["declared_products"] = r.declared_products.get_str();
    j["homogeneity"] = ratio_json(r.homogeneity, places);
    j["commonality"] = json::object();
    for (const auto& [name, c] : r.commonality)
        j["commonality"][name] = ratio_json(c, places);
    j["warning"] = r.warning ? json(*r.warning) : json(nullptr);
    return j;
}

int cmd_econ(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    const CostModel costs = load_costs(cfg.costs, err);
    const auto analysis = analyze_or_exit(tree, cfg, err);
    const auto r = econ_report(analysis, costs);
    if (cfg.json_output) {
        out << econ_json(r, cfg.round).dump() << "\n";
    } else {
        out << r.spl_cost.str() << (r.currency.empty() ? "" : " " + r.currency) << "\n";
        out << "counted products: " << r.counted_products.get_str() << "\n";
        out << "declared products: " << r.declared_products.get_str() << "\n";
        out << "homogeneity: " << ratio_text(r.homogeneity, cfg.round) << "\n";
    }
    if (r.warning)
        err << "warning: " << *r.warning << "\n";
    return exit_ok;
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FeatureTree tree = load_tree(cfg, err);
    std::optional<CostModel> costs;
    if (!cfg.costs.empty())
        costs = load_costs(cfg.costs, err);
    const auto analysis = analyze_or_exit(tree, cfg, err);
    json j = analysis_json(analysis, cfg.round);
    j["model"] = json::parse(emit_json(tree));
    if (costs)
        j["econ"] = econ_json(econ_report(analysis, *costs), cfg.round);
    out << j.dump() << "\n";
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of feature models", "fm"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", cfg.input, "Model (.fm, or .json for the JSON schema)")->required();
        sub->add_flag("--json", cfg.json_output, "JSON output");
        sub->add_option("--round", cfg.round, "Decimal places for displayed ratios")
            ->check(CLI::Range(0u, 30u))
            ->default_val(6);
        sub->add_option("--oracle-limit", cfg.oracle_limit, "Largest model the oracle enumerates")
            ->check(CLI::Range(std::size_t{1}, max_oracle_nodes));
        sub->add_option("--clause-warn", cfg.clause_warn, "Warn when constraints expand to more clauses");
        sub->add_flag("--parallel", cfg.parallel, "Use the OpenMP kernels");
        sub->add_flag("--allow-reserved", cfg.allow_reserved, "Accept _-prefixed names in .fm input");
        return sub;
    };

    using Handler = int (*)(const RunConfig&, std::ostream&, std::ostream&);
    std::vector<std::pair<CLI::App*, Handler>> commands;
    commands.emplace_back(common(app.add_subcommand("validate", "Check a model")), cmd_validate);
    auto* normalize = common(app.add_subcommand("normalize", "Apply normalizations and print the model"));
    normalize->add_option("--split", cfg.splits, "Split a mixed group: PARENT:kind=a,b;kind=c")->take_all();
    normalize->add_option("--primitive", cfg.primitives, "Comma-separated internal features to make leaves");
    normalize->add_flag("--dag", cfg.dag, "Input is a multi-parent graph in JSON");
    normalize->add_flag("--clauses", cfg.clauses, "Print the CNF clauses of the constraints instead");
    commands.emplace_back(normalize, cmd_normalize);
    commands.emplace_back(common(app.add_subcommand("count", "Number of products")), cmd_count);
    commands.emplace_back(common(app.add_subcommand("commonality", "Per-feature commonality")), cmd_commonality);
    commands.emplace_back(common(app.add_subcommand("homogeneity", "Homogeneity of the product line")),
                          cmd_homogeneity);
    commands.emplace_back(common(app.add_subcommand("oracle-check", "Compare the engine with enumeration")),
                          cmd_oracle_check);
    auto* econ = common(app.add_subcommand("econ", "Cost of the product line"));
    econ->add_option("costs", cfg.costs, "Cost model JSON")->required();
    commands.emplace_back(econ, cmd_econ);
    auto* report = common(app.add_subcommand("report", "Full JSON report"));
    report->add_option("costs", cfg.costs, "Cost model JSON");
    commands.emplace_back(report, cmd_report);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        for (const auto& [sub, handler] : commands)
            if (sub->parsed())
                return handler(cfg, out, err);
    } catch (const Exit& e) {
        return e.code;
    } catch (const EmptyProductLine& e) {
        err << e.what() << "\n";
        return exit_empty;
    } catch (const OracleLimitExceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_oracle_limit;
    } catch (const ValidationError& e) {
        print_violations(cfg.input, e.report(), nullptr, err);
        return exit_validation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_mismatch;
    }
    return exit_input;
}

} // namespace fm
