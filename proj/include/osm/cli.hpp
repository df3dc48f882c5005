#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "osm/pipeline.hpp"
#include "osm/printer.hpp"
#include "osm/traversal.hpp"

namespace osm {

/// Process exit statuses.
enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2 };

namespace detail {

struct CliState {
    std::vector<std::string> sources;
    std::string method;
    std::string tracefile;
    std::string props;
    std::string out;
    std::string format = "json";
    std::vector<std::string> aliases;
    bool strict_atoms = false;
    int inline_depth = 16;
};

inline std::vector<fs::path> as_paths(const std::vector<std::string>& v) {
    return {v.begin(), v.end()};
}

inline std::map<std::string, std::string> parse_aliases(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> out;
    for (const auto& a : raw) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
            throw Error("--alias expects AspectName=ConcernId, got '" + a + "'");
        out[a.substr(0, eq)] = a.substr(eq + 1);
    }
    return out;
}

inline PropertySpec load_spec(const std::string& path) {
    if (path.empty()) return {};
    try {
        return parse_property_spec(read_file(path));
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_output(const CliState& st, const std::string& text, std::ostream& out) {
    if (st.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(st.out, std::ios::binary);
    if (!f) throw InputError(st.out + ": cannot write");
    f << text;
}

inline std::vector<fs::path> trace_files(const fs::path& p) {
    if (!fs::exists(p)) throw InputError(p.string() + ": no such file or directory");
    if (!fs::is_directory(p)) return {p};
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".trace") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

inline int cmd_parse(const CliState& st, std::ostream& out) {
    const Program prog = load_program(as_paths(st.sources));
    out << "types: " << prog.types().size() << "\n";
    out << "aspects: " << prog.aspects().size() << "\n";
    for (const auto& info : collect_aspect_info(prog))
        out << "aspect " << info.name << ": pointcuts=" << info.pointcuts << " before=" << info.before
            << " after=" << info.after << " around=" << info.around << "\n";
    return kPass;
}

inline int cmd_weave(const CliState& st, std::ostream& out) {
    const Program prog = load_program(as_paths(st.sources));
    const WovenProgram woven = weave(prog);
    for (const auto& b : woven.bindings()) {
        out << b.joinpoint.owner << " [";
        for (std::size_t i = 0; i < b.joinpoint.path.size(); ++i) out << (i ? "," : "") << b.joinpoint.path[i];
        out << "] " << b.joinpoint.signature.receiver << "." << b.joinpoint.signature.method << "/"
            << b.joinpoint.signature.arity << " <- " << advice_owner(b.aspect, b.kind, b.advice_ordinal)
            << " rank=" << b.precedence_rank << "\n";
    }
    const auto valuation = presence_valuation(woven, parse_aliases(st.aliases));
    for (const auto& [id, present] : valuation.values)
        out << "concern " << id << " = " << (present ? "true" : "false") << "\n";
    return kPass;
}

inline int cmd_cfg(const CliState& st, std::ostream& out) {
    const WovenProgram woven = weave(load_program(as_paths(st.sources)));
    write_output(st, to_dot(build_cfg(woven, st.method, st.inline_depth)), out);
    return kPass;
}

inline int cmd_kripke(const CliState& st, std::ostream& out) {
    const WovenProgram woven = weave(load_program(as_paths(st.sources)));
    const auto model = model_of(woven, st.method, st.inline_depth);
    write_output(st, emit(model, st.format == "dot" ? ModelFormat::Dot : ModelFormat::Json), out);
    return kPass;
}

inline int cmd_check(const CliState& st, std::ostream& out, std::ostream& err) {
    const auto spec = load_spec(st.props);
    PipelineOptions opts;
    opts.strict_atoms = st.strict_atoms;
    opts.inline_depth = st.inline_depth;
    opts.aliases = parse_aliases(st.aliases);
    const Report report = run_pipeline(as_paths(st.sources), spec, opts);
    for (const auto& w : report.warnings) err << "warning: " << w << "\n";
    write_output(st, to_json(report).dump(2) + "\n", out);
    return report.pass() ? kPass : kViolation;
}

inline int cmd_trace(const CliState& st, std::ostream& out, std::ostream& err) {
    const WovenProgram woven = weave(load_program(as_paths(st.sources)));
    const auto model = model_of(woven, st.method, st.inline_depth);
    const auto files = trace_files(st.tracefile);
    std::vector<Trace> traces;
    for (const auto& f : files) {
        std::ifstream in(f);
        traces.push_back(read_trace(in));
    }
    TraceReport report;
    try {
        report = check_trace_set(model, traces);
    } catch (const EmptyTrace& e) {
        throw InputError(files[e.index].string() + ": trace is empty");
    }

    using J = nlohmann::ordered_json;
    J j;
    j["version"] = 1;
    j["method"] = st.method;
    J list = J::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        J t;
        t["file"] = files[i].filename().string();
        t["conforming"] = report.verdicts[i].conforming;
        t["divergence"] = report.verdicts[i].divergence ? J(*report.verdicts[i].divergence) : J(nullptr);
        list.push_back(std::move(t));
    }
    j["traces"] = std::move(list);
    j["conforming"] = report.conforming;
    j["total"] = report.total;
    const auto fraction = report.fraction();
    j["fraction"] = fraction ? J(*fraction) : J(nullptr);
    J warnings = J::array();
    if (!fraction) {
        warnings.push_back("no traces given; conformance fraction undefined");
        err << "warning: no traces given; conformance fraction undefined\n";
    }
    j["warnings"] = std::move(warnings);
    write_output(st, j.dump(2) + "\n", out);
    return report.conforming == report.total ? kPass : kViolation;
}

inline int cmd_graph(const CliState& st, std::ostream& out, std::ostream& err) {
    const auto spec = load_spec(st.props);
    std::vector<NamedFormula> formulas;
    for (const auto& e : spec.entries)
        if (e.kind == EntryKind::Config) formulas.push_back({e.name, e.formula});
    const auto g = concern_graph(formulas);
    for (const auto& w : g.warnings) err << "warning: " << w << "\n";
    write_output(st, to_dot(g), out);
    return kPass;
}

} // namespace detail

/// Entry point of the `osm` tool. Exit 0: everything holds / conforms;
/// 1: at least one violation or non-conforming trace; 2: usage, input or
/// internal error (one line on `err`).
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
    detail::CliState st;
    CLI::App app{"Aspect-oriented weaving and CTL model checking toolchain", "osm"};
    app.require_subcommand(1);

    auto sources = [&](CLI::App* sub) {
        sub->add_option("sources", st.sources, ".osm files or directories")->required();
    };
    auto depth = [&](CLI::App* sub) {
        sub->add_option("--inline-depth", st.inline_depth, "Maximum inlining depth")
            ->check(CLI::PositiveNumber);
    };

    auto* parse_cmd = app.add_subcommand("parse", "Syntax check and list aspect metadata");
    sources(parse_cmd);

    auto* weave_cmd = app.add_subcommand("weave", "List advice bindings and concern presence");
    sources(weave_cmd);
    weave_cmd->add_option("--alias", st.aliases, "AspectName=ConcernId");

    auto* cfg_cmd = app.add_subcommand("cfg", "Emit the woven control-flow graph of a method (DOT)");
    cfg_cmd->add_option("method", st.method, "Type.method")->required();
    sources(cfg_cmd);
    depth(cfg_cmd);
    cfg_cmd->add_option("--out", st.out, "Output file");

    auto* kripke_cmd = app.add_subcommand("kripke", "Emit the Kripke structure of a method");
    kripke_cmd->add_option("method", st.method, "Type.method")->required();
    sources(kripke_cmd);
    depth(kripke_cmd);
    kripke_cmd->add_option("--format", st.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    kripke_cmd->add_option("--out", st.out, "Output file");

    auto* check_cmd = app.add_subcommand("check", "Check configuration and CTL properties");
    sources(check_cmd);
    check_cmd->add_option("--props", st.props, "Property file");
    check_cmd->add_option("--alias", st.aliases, "AspectName=ConcernId");
    check_cmd->add_option("--out", st.out, "Report file");
    check_cmd->add_flag("--strict-atoms", st.strict_atoms, "Reject atoms that label no state");
    depth(check_cmd);

    auto* trace_cmd = app.add_subcommand("trace", "Check observed traces against a method's model");
    trace_cmd->add_option("method", st.method, "Type.method")->required();
    trace_cmd->add_option("tracefile", st.tracefile, "Trace file or directory of .trace files")->required();
    sources(trace_cmd);
    depth(trace_cmd);
    trace_cmd->add_option("--out", st.out, "Report file");

    auto* graph_cmd = app.add_subcommand("graph", "Emit the concern dependency graph (DOT)");
    graph_cmd->add_option("--props", st.props, "Property file")->required();
    graph_cmd->add_option("--out", st.out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*parse_cmd) return detail::cmd_parse(st, out);
        if (*weave_cmd) return detail::cmd_weave(st, out);
        if (*cfg_cmd) return detail::cmd_cfg(st, out);
        if (*kripke_cmd) return detail::cmd_kripke(st, out);
        if (*check_cmd) return detail::cmd_check(st, out, err);
        if (*trace_cmd) return detail::cmd_trace(st, out, err);
        if (*graph_cmd) return detail::cmd_graph(st, out, err);
    } catch (const std::exception& e) {
        err << "osm: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace osm
