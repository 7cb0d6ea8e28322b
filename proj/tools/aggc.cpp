#include "agg/catalog.hpp"
#include "agg/compiler.hpp"
#include "agg/connectives.hpp"
#include "agg/dsl.hpp"
#include "agg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct LoadedExpr {
    agg::ExprPtr expr;
    std::optional<agg::CompileReport> report;
};

LoadedExpr load_expr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    nlohmann::json doc = nlohmann::json::parse(in);
    LoadedExpr out;
    if (doc.is_object() && doc.contains("expr")) {
        out.expr = agg::dsl::from_json(doc.at("expr"));
        if (doc.contains("report"))
            out.report = agg::CompileReport::from_json(doc.at("report"));
    } else {
        out.expr = agg::dsl::from_json(doc);
    }
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << content;
}

double parse_coord(const std::string& s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid coordinate '" + s + "'");
    }
}

std::vector<double> parse_fixed(const std::string& csv) {
    std::vector<double> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_coord(item));
    return out;
}

int cmd_compile(const std::string& fn, int arity, int k, const std::string& out_path) {
    agg::AggFunction f = agg::catalog::get(fn, arity);
    auto [expr, report] = agg::compile_grid(f, k);
    nlohmann::json doc{{"fn", fn},
                       {"expr", agg::dsl::to_json(expr)},
                       {"report", report.to_json()}};
    write_text(out_path, doc.dump(2) + "\n");
    std::cerr << "compiled " << fn << " arity=" << report.arity << " k=" << report.k
              << ": " << report.h_blocks << " h-blocks, " << report.node_count
              << " nodes, " << fmt12(report.wall_ms) << " ms\n";
    return kExitOk;
}

int cmd_eval(const std::vector<std::string>& args, const std::string& dsl_text) {
    agg::ExprPtr expr;
    std::size_t first_coord = 0;
    std::vector<double> coords;
    if (!dsl_text.empty()) {
        for (const auto& a : args) coords.push_back(parse_coord(a));
        int n = coords.empty() ? 1 : static_cast<int>(coords.size());
        expr = agg::dsl::parse(dsl_text, n);
    } else {
        if (args.empty())
            throw std::invalid_argument("eval needs an expression file or --dsl text");
        expr = load_expr_file(args[0]).expr;
        first_coord = 1;
        for (std::size_t i = first_coord; i < args.size(); ++i)
            coords.push_back(parse_coord(args[i]));
    }
    agg::UnitValue v = agg::evaluate(expr, agg::InputVector(coords));
    std::cout << fmt12(v.value()) << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite, const std::string& expr_path,
               const std::string& fn, int samples, std::uint64_t seed, bool as_json) {
    if (!suite.empty()) {
        if (suite != "lemmas")
            throw std::invalid_argument("unknown suite '" + suite + "' (try: lemmas)");
        agg::VerifyReport report = agg::lemma_suite(seed);
        std::cout << (as_json ? report.to_json().dump(2) + "\n" : report.to_text());
        return report.all_passed() ? kExitOk : kExitCheckFailed;
    }
    if (expr_path.empty() || fn.empty())
        throw std::invalid_argument("verify needs --suite lemmas or --expr PATH --fn NAME");
    LoadedExpr loaded = load_expr_file(expr_path);
    int grid_k = loaded.report ? loaded.report->k : 0;
    agg::AggFunction f = agg::catalog::get(fn, loaded.expr->arity());
    agg::ApproxError ae = agg::approx_error(f, loaded.expr, samples, seed, grid_k);
    if (as_json) {
        std::cout << ae.to_json().dump(2) << "\n";
    } else {
        std::cout << "max_gap=" << fmt12(ae.max_gap) << " mean_gap=" << fmt12(ae.mean_gap)
                  << " lower_bound=" << (ae.lower_bound_ok ? "ok" : "VIOLATED")
                  << " grid_exact="
                  << (!ae.grid_checked ? "(unchecked)" : ae.grid_exact ? "yes" : "NO")
                  << "\n";
        auto describe = [](const char* label, const agg::Witness& w) {
            std::cout << label << " witness: expected=" << fmt12(w.expected)
                      << " actual=" << fmt12(w.actual) << " at (";
            for (std::size_t i = 0; i < w.input.size(); ++i)
                std::cout << (i ? ", " : "") << fmt12(w.input[i]);
            std::cout << ")\n";
        };
        if (ae.lower_violation) describe("lower-bound", *ae.lower_violation);
        if (ae.grid_witness) describe("grid-exactness", *ae.grid_witness);
    }
    return ae.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_plotdata(const std::string& fn, const std::string& expr_path, int axis,
                 const std::string& fixed_csv, int steps, const std::string& out_path) {
    if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
    LoadedExpr loaded = load_expr_file(expr_path);
    int n = loaded.expr->arity();
    if (axis < 0 || axis >= n)
        throw std::invalid_argument("--axis must name a coordinate of the expression");
    std::vector<double> fixed = parse_fixed(fixed_csv);
    if (static_cast<int>(fixed.size()) != n - 1)
        throw std::invalid_argument("--fixed needs exactly arity-1 values");
    agg::AggFunction f = agg::catalog::get(fn, n);

    std::ostringstream csv;
    csv << "x,f,approx\n";
    std::vector<double> coords(static_cast<std::size_t>(n));
    for (int j = 0; j <= steps; ++j) {
        double x = static_cast<double>(j) / steps;
        int fi = 0;
        for (int i = 0; i < n; ++i)
            coords[static_cast<std::size_t>(i)] =
                i == axis ? x : fixed[static_cast<std::size_t>(fi++)];
        csv << fmt12(x) << "," << fmt12(f(coords)) << ","
            << fmt12(agg::evaluate(loaded.expr, coords)) << "\n";
    }
    write_text(out_path, csv.str());
    return kExitOk;
}

int cmd_dual(const std::string& in_path, const std::string& out_path) {
    LoadedExpr loaded = load_expr_file(in_path);
    agg::ExprPtr dual = agg::dualize_expr(loaded.expr);
    nlohmann::json doc{{"expr", agg::dsl::to_json(dual)}};
    write_text(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_implication(const std::string& conj, const std::string& form, int steps,
                    const std::string& out_path) {
    if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
    agg::AggFunction f = agg::catalog::get(conj, 2);
    agg::Implication impl = form == "ds"
                                ? agg::implication_from_disj(f, agg::Negation::zadeh())
                                : agg::implication_from(f, agg::Negation::zadeh());
    std::ostringstream csv;
    csv << "x,y," << impl.name << "\n";
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            double x = static_cast<double>(i) / steps;
            double y = static_cast<double>(j) / steps;
            csv << fmt12(x) << "," << fmt12(y) << "," << fmt12(impl(x, y)) << "\n";
        }
    write_text(out_path, csv.str());
    agg::VerifyReport contract = agg::check_implication_contract(impl);
    std::cerr << contract.to_text();
    return contract.all_passed() ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compile aggregation functions on [0,1] into join/meet/median/threshold"
                 " basis expressions and verify them against oracles"};
    app.require_subcommand(1);

    auto* compile = app.add_subcommand("compile", "compile a catalog function on the I_k grid");
    std::string c_fn, c_out;
    int c_arity = 2, c_k = 2;
    compile->add_option("--fn", c_fn, "catalog function name")->required();
    compile->add_option("--arity", c_arity, "arity n")->required();
    compile->add_option("--k", c_k, "grid resolution")->required();
    compile->add_option("--out", c_out, "output JSON path (default: stdout)");

    auto* eval = app.add_subcommand("eval", "evaluate an expression at a point");
    std::vector<std::string> e_args;
    std::string e_dsl;
    eval->add_option("args", e_args, "EXPR_PATH (unless --dsl) followed by coordinates");
    eval->add_option("--dsl", e_dsl, "expression text instead of a file");

    auto* verify = app.add_subcommand("verify", "run oracle suites or gap measurement");
    std::string v_suite, v_expr, v_fn;
    int v_samples = 10000;
    std::uint64_t v_seed = agg::kDefaultSeed;
    bool v_json = false;
    verify->add_option("--suite", v_suite, "named suite (lemmas)");
    verify->add_option("--expr", v_expr, "compiled expression JSON");
    verify->add_option("--fn", v_fn, "reference catalog function");
    verify->add_option("--samples", v_samples, "random sample count");
    verify->add_option("--seed", v_seed, "random seed");
    verify->add_flag("--json", v_json, "JSON report");

    auto* plot = app.add_subcommand("plotdata", "CSV sweep of f vs compiled along one axis");
    std::string p_fn, p_expr, p_fixed, p_out;
    int p_axis = 0, p_steps = 100;
    plot->add_option("--fn", p_fn, "catalog function name")->required();
    plot->add_option("--expr", p_expr, "compiled expression JSON")->required();
    plot->add_option("--axis", p_axis, "coordinate to sweep")->required();
    plot->add_option("--fixed", p_fixed, "comma-separated values of the other coordinates");
    plot->add_option("--steps", p_steps, "number of steps")->required();
    plot->add_option("--out", p_out, "CSV path (default: stdout)");

    auto* dual = app.add_subcommand("dual", "dualize an expression file");
    std::string d_in, d_out;
    dual->add_option("--in", d_in, "input expression JSON")->required();
    dual->add_option("--out", d_out, "output JSON path (default: stdout)");

    auto* impl = app.add_subcommand("implication", "tabulate a fuzzy implication");
    std::string i_conj, i_form = "sn", i_out;
    int i_steps = 10;
    impl->add_option("--conj", i_conj, "binary catalog function with annihilator 0 (or 1 for ds)")
        ->required();
    impl->add_option("--form", i_form, "sn = N(conj(x,N(y))), ds = disj(N(x),y)")
        ->check(CLI::IsMember({"sn", "ds"}));
    impl->add_option("--steps", i_steps, "grid steps for the table");
    impl->add_option("--out", i_out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compile->parsed()) return cmd_compile(c_fn, c_arity, c_k, c_out);
        if (eval->parsed()) return cmd_eval(e_args, e_dsl);
        if (verify->parsed()) return cmd_verify(v_suite, v_expr, v_fn, v_samples, v_seed, v_json);
        if (plot->parsed()) return cmd_plotdata(p_fn, p_expr, p_axis, p_fixed, p_steps, p_out);
        if (dual->parsed()) return cmd_dual(d_in, d_out);
        if (impl->parsed()) return cmd_implication(i_conj, i_form, i_steps, i_out);
    } catch (const agg::dsl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
