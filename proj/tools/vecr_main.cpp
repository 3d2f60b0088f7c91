// Command-line front end: type checking, reduction traces, weights, vector
// and matrix encodings, randomized metatheory suites, and a small REPL.
//
// Results go to the output stream, diagnostics to the error stream, so a
// golden file captures results only.  Exit codes: 0 success, 1 domain
// failure (type error, out of fuel, failed decode, failing property),
// 2 usage or input-syntax error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vecr/canonical.hpp"
#include "vecr/derivation.hpp"
#include "vecr/encodings.hpp"
#include "vecr/infer.hpp"
#include "vecr/parser.hpp"
#include "vecr/printer.hpp"
#include "vecr/properties.hpp"
#include "vecr/rewrite.hpp"

namespace {

using namespace vecr;

Prelude builtin_prelude() {
    return {{"true", term_true()}, {"false", term_false()}, {"H", encode_matrix(hadamard())}};
}

// `check` accepts either an inline expression or the name of a file holding one.
std::string slurp_if_file(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

// Echo Unicode spellings back only when the input used them (or always
// ASCII under --ascii); known closed terms print by name.
PrintOpts opts_for(const std::string& input, bool ascii, const Prelude& names) {
    PrintOpts o;
    o.unicode = !ascii && has_unicode_syntax(input);
    o.aliases = &names;
    return o;
}

std::string path_str(const std::vector<int>& p) {
    if (p.empty()) return "/";
    std::string s;
    for (int i : p) s += "/" + std::to_string(i);
    return s;
}

int domain_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

int fail_to_rc(const TypeFailure& f) {
    return domain_error(std::string(type_fail_kind_name(f.kind)) + ": " + f.message);
}

// Input-syntax trouble exits 2, everything domain-shaped exits 1.
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return (e.kind == "ParseError" || e.kind == "SortError") ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_check(const std::string& expr_arg, const std::optional<std::string>& type_arg, bool ascii,
              long budget) {
    Prelude names = builtin_prelude();
    std::string text = slurp_if_file(expr_arg);
    TermPtr t = parse_term(text, &names);
    PrintOpts po = opts_for(text + (type_arg ? *type_arg : std::string()), ascii, names);
    InferLimits lim;
    lim.budget = budget;
    if (type_arg) {
        TypePtr goal = parse_type(*type_arg);
        CheckResult r = check({}, t, goal, lim);
        if (!r) return fail_to_rc(*r.failure);
        std::cout << "OK\n" << render_derivation(r.deriv, po);
        return 0;
    }
    SynthResult s = synthesize({}, t, lim);
    if (!s) return fail_to_rc(*s.failure);
    std::cout << ": " << print_type(display_form(s.type), po) << "\n"
              << render_derivation(s.deriv, po);
    return 0;
}

int run_reduce(const std::string& expr, long fuel, bool trace, bool trace_json, bool ascii) {
    Prelude names = builtin_prelude();
    TermPtr t = parse_term(expr, &names);
    PrintOpts po = opts_for(expr, ascii, names);
    NormalizeResult r = normalize(t, fuel, trace || trace_json);
    if (trace_json) {
        for (const TraceEntry& e : r.trace) {
            nlohmann::json j;
            j["rule"] = rule_name(e.rule);
            j["path"] = e.path;
            j["term"] = print_term(e.term, po);
            std::cout << j.dump() << "\n";
        }
        nlohmann::json fin;
        fin["normal_form"] =
            r.fuel_exhausted ? nlohmann::json() : nlohmann::json(print_term(r.term, po));
        fin["steps"] = r.steps;
        fin["fuel_exhausted"] = r.fuel_exhausted;
        std::cout << fin.dump() << "\n";
        if (r.fuel_exhausted) return domain_error("out of fuel after " +
                                                  std::to_string(r.steps) + " steps");
        return 0;
    }
    if (trace) {
        for (const TraceEntry& e : r.trace) {
            std::cout << "[" << rule_name(e.rule) << "] @" << path_str(e.path) << "  "
                      << print_term(e.term, po) << "\n";
        }
    }
    if (r.fuel_exhausted)
        return domain_error("out of fuel after " + std::to_string(r.steps) + " steps");
    std::cout << print_term(r.term, po) << "\n";
    return 0;
}

int run_weight(const std::string& arg, bool force_type, long fuel, bool ascii) {
    Prelude names = builtin_prelude();
    (void)ascii;
    if (!force_type) {
        TermPtr t;
        try {
            t = parse_term(arg, &names);
        } catch (const Error& e) {
            if (e.kind != "ParseError") throw;
        }
        if (t) {
            NormalizeResult r = normalize(t, fuel, false);
            if (r.fuel_exhausted)
                return domain_error("out of fuel after " + std::to_string(r.steps) + " steps");
            try {
                std::cout << weight_value(r.term).show() << "\n";
                return 0;
            } catch (const NotAValue&) {
                // fall through: the argument may name a type instead
            }
        }
    }
    TypePtr ty;
    try {
        ty = parse_type(arg);
    } catch (const Error&) {
        return usage_error(
            "argument parses neither as a term reducing to a value nor as a type: " + arg);
    }
    std::cout << weight_type(ty).show() << "\n";
    return 0;
}

Matrix to_matrix(const std::vector<std::vector<Scalar>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

int run_encode(const std::string& literal, bool ascii) {
    std::size_t i = literal.find_first_not_of(" \t\r\n");
    if (i == std::string::npos) throw Error("ParseError", "empty literal");
    Prelude names = builtin_prelude();
    PrintOpts po = opts_for("", ascii, names);
    po.aliases = nullptr;  // show the actual encoded term, not its nickname
    if (literal[i] == '(') {
        std::vector<Scalar> v = parse_vector_literal(literal);
        std::cout << print_term(encode_vector(v), po) << "\n"
                  << ": " << print_type(display_form(vector_type(v)), po) << "\n";
        return 0;
    }
    if (literal[i] == '[') {
        Matrix m = to_matrix(parse_matrix_literal(literal));
        std::cout << print_term(encode_matrix(m), po) << "\n"
                  << ": " << print_unit(matrix_type(m), po) << "\n";
        return 0;
    }
    throw Error("ParseError", "expected a '(a, b)' vector or '[a, b; c, d]' matrix literal");
}

int run_apply(const std::string& mat_lit, const std::string& vec_lit, long fuel) {
    Matrix m = to_matrix(parse_matrix_literal(mat_lit));
    std::vector<Scalar> v = parse_vector_literal(vec_lit);
    if (m.cols != v.size())
        return domain_error("dimension mismatch: matrix has " + std::to_string(m.cols) +
                            " columns, vector has " + std::to_string(v.size()) + " entries");
    std::optional<std::vector<Scalar>> out = apply_and_decode(m, encode_vector(v), fuel);
    if (!out) return domain_error("reduction did not reach an encoded vector within fuel");
    std::string s = "(";
    for (std::size_t k = 0; k < out->size(); ++k) {
        if (k) s += ", ";
        s += (*out)[k].show();
    }
    std::cout << s << ")\n";
    return 0;
}

int run_prop(const std::string& suite, const GenConfig& cfg, bool json) {
    std::vector<PropertyReport> reps;
    if (suite == "all")
        reps = run_all_properties(cfg);
    else if (suite == "subject-reduction")
        reps = {run_subject_reduction(cfg)};
    else if (suite == "progress")
        reps = {run_progress(cfg)};
    else if (suite == "normalization")
        reps = {run_normalization(cfg)};
    else if (suite == "weight-preservation")
        reps = {run_weight_preservation(cfg)};
    else if (suite == "equivalence")
        reps = {run_equivalence(cfg)};
    else
        return usage_error("unknown suite: " + suite);
    std::string text = json ? report_json(reps) : report_text(reps);
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    for (const PropertyReport& r : reps)
        if (!r.ok()) return 1;
    return 0;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool is_ident(const std::string& s) {
    if (s.empty() || !(std::isalpha((unsigned char)s[0]) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum((unsigned char)c) || c == '_' || c == '\'')) return false;
    return true;
}

int repl_eval(const std::string& expr, Prelude& defs, bool ascii, bool want_trace) {
    TermPtr t = parse_term(expr, &defs);
    PrintOpts po = opts_for(expr, ascii, defs);
    NormalizeResult r = normalize(t, 100000, want_trace);
    if (want_trace) {
        for (const TraceEntry& e : r.trace) {
            std::cout << "[" << rule_name(e.rule) << "] @" << path_str(e.path) << "  "
                      << print_term(e.term, po) << "\n";
        }
    }
    if (r.fuel_exhausted)
        return domain_error("out of fuel after " + std::to_string(r.steps) + " steps");
    std::cout << print_term(r.term, po) << "\n";
    return 0;
}

int repl_line(const std::string& raw, Prelude& defs, bool ascii) {
    std::string s = trim(raw);
    if (s.empty()) return 0;
    PrintOpts po = opts_for(s, ascii, defs);
    if (s.rfind(":t ", 0) == 0) {
        TermPtr t = parse_term(trim(s.substr(3)), &defs);
        SynthResult r = synthesize({}, t);
        if (!r) return fail_to_rc(*r.failure);
        std::cout << print_type(display_form(r.type), po) << "\n";
        return 0;
    }
    if (s.rfind(":r ", 0) == 0) return repl_eval(trim(s.substr(3)), defs, ascii, false);
    if (s.rfind(":trace ", 0) == 0) return repl_eval(trim(s.substr(7)), defs, ascii, true);
    if (s.rfind(":w ", 0) == 0) {
        TermPtr t = parse_term(trim(s.substr(3)), &defs);
        NormalizeResult r = normalize(t, 100000, false);
        if (r.fuel_exhausted)
            return domain_error("out of fuel after " + std::to_string(r.steps) + " steps");
        std::cout << weight_value(r.term).show() << "\n";
        return 0;
    }
    if (s.rfind("let ", 0) == 0) {
        std::string rest = trim(s.substr(4));
        std::size_t eq = rest.find('=');
        if (eq == std::string::npos) return usage_error("expected: let name = expr");
        std::string name = trim(rest.substr(0, eq));
        std::string expr = trim(rest.substr(eq + 1));
        if (!is_ident(name)) return usage_error("bad definition name: " + name);
        if (expr.empty()) return usage_error("expected: let name = expr");
        TermPtr t = parse_term(expr, &defs);
        std::vector<std::string> fv = free_vars(t);
        if (!fv.empty()) {
            std::string msg = "definition must be closed; free:";
            for (const std::string& x : fv) msg += " " + x;
            return domain_error(msg);
        }
        for (auto& d : defs) {
            if (d.first == name) {
                d.second = t;
                return 0;
            }
        }
        defs.emplace_back(name, t);
        return 0;
    }
    if (!s.empty() && s[0] == ':') return usage_error("unknown command: " + s);
    return repl_eval(s, defs, ascii, false);
}

int run_repl(bool ascii) {
    Prelude defs = builtin_prelude();
    std::string line;
    while (true) {
        std::cerr << "vecr> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (trim(line) == ":q") break;
        guarded([&]() { return repl_line(line, defs, ascii); });
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for an algebraic lambda calculus with scaled sums of terms and types"};
    app.require_subcommand(1);
    app.fallthrough();
    bool ascii = false;
    app.add_flag("--ascii", ascii, "force pure-ASCII output");

    int rc = 0;

    auto* c = app.add_subcommand("check", "type-check a term against a type, or synthesize one");
    std::string c_expr, c_type;
    long c_budget = InferLimits{}.budget;
    c->add_option("expr", c_expr, "term expression, or path to a file holding one")->required();
    CLI::Option* c_ty = c->add_option("type", c_type, "claimed type to check against");
    c->add_option("--budget", c_budget, "checker search budget");
    c->callback([&]() {
        rc = guarded([&]() {
            std::optional<std::string> ty =
                c_ty->count() ? std::optional<std::string>(c_type) : std::nullopt;
            return run_check(c_expr, ty, ascii, c_budget);
        });
    });

    auto* r = app.add_subcommand("reduce", "normalize a term");
    std::string r_expr;
    long r_fuel = 100000;
    bool r_trace = false, r_trace_json = false;
    r->add_option("expr", r_expr, "term expression")->required();
    r->add_option("--fuel", r_fuel, "maximum reduction steps");
    r->add_flag("--trace", r_trace, "print one line per step: [rule] @path  term-after");
    r->add_flag("--trace-json", r_trace_json, "print the trace as line-delimited JSON");
    r->callback([&]() {
        rc = guarded([&]() { return run_reduce(r_expr, r_fuel, r_trace, r_trace_json, ascii); });
    });

    auto* w = app.add_subcommand("weight", "weight of a term's normal form, or of a type");
    std::string w_arg;
    bool w_type = false;
    long w_fuel = 100000;
    w->add_option("arg", w_arg, "term or type expression")->required();
    w->add_flag("--type", w_type, "read the argument as a type");
    w->add_option("--fuel", w_fuel, "maximum reduction steps");
    w->callback([&]() {
        rc = guarded([&]() { return run_weight(w_arg, w_type, w_fuel, ascii); });
    });

    auto* e = app.add_subcommand("encode", "encode a vector or matrix literal as a term");
    std::string e_lit;
    e->add_option("literal", e_lit, "'(a, b)' vector or '[a, b; c, d]' matrix")->required();
    e->callback([&]() {
        rc = guarded([&]() { return run_encode(e_lit, ascii); });
    });

    auto* a = app.add_subcommand("apply", "matrix-vector product through encode, reduce, decode");
    std::string a_mat, a_vec;
    long a_fuel = 100000;
    a->add_option("matrix", a_mat, "'[a, b; c, d]' matrix literal")->required();
    a->add_option("vector", a_vec, "'(a, b)' vector literal")->required();
    a->add_option("--fuel", a_fuel, "maximum reduction steps");
    a->callback([&]() {
        rc = guarded([&]() { return run_apply(a_mat, a_vec, a_fuel); });
    });

    auto* p = app.add_subcommand("prop", "randomized metatheory suites");
    std::string p_suite;
    GenConfig p_cfg;
    bool p_json = false;
    p->add_option("suite", p_suite, "subject-reduction|progress|normalization|weight-preservation|equivalence|all")
        ->required()
        ->check(CLI::IsMember({"subject-reduction", "progress", "normalization",
                               "weight-preservation", "equivalence", "all"}));
    CLI::Option* p_seed = p->add_option("--seed", p_cfg.seed, "generator seed");
    p->add_option("--cases", p_cfg.cases, "property instances per suite");
    p->add_option("--depth", p_cfg.max_depth, "term generator depth bound");
    p->add_option("--fuel", p_cfg.fuel, "reduction fuel per case");
    p->add_option("--strategies", p_cfg.random_strategies, "random reduction orders per case");
    p->add_flag("--closed", p_cfg.closed, "generate closed terms only");
    p->add_option("--budget", p_cfg.infer_budget, "checker search budget per judgment");
    p->add_flag("--json", p_json, "emit the report as JSON");
    p->callback([&]() {
        rc = guarded([&]() {
            if (!p_seed->count()) {
                if (const char* env = std::getenv("VECR_SEED")) {
                    char* end = nullptr;
                    unsigned long long v = std::strtoull(env, &end, 10);
                    if (end != env && end && *end == '\0')
                        p_cfg.seed = v;
                    else
                        std::cerr << "warning: ignoring malformed VECR_SEED\n";
                }
            }
            return run_prop(p_suite, p_cfg, p_json);
        });
    });

    auto* q = app.add_subcommand("repl", "interactive loop; :t :r :w :trace :q and let bindings");
    q->callback([&]() {
        rc = guarded([&]() { return run_repl(ascii); });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex);
        return code == 0 ? 0 : 2;
    }
    return rc;
}
