#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "osm/ast.hpp"
#include "osm/error.hpp"
#include "osm/weaver.hpp"

namespace osm {

enum class NodeKind { Entry, Exit, Error, Action, Branch };
enum class Guard { Epsilon, Then, Else };

inline std::string_view to_string(Guard g) {
    switch (g) {
    case Guard::Epsilon: return "";
    case Guard::Then: return "then";
    case Guard::Else: return "else";
    }
    return "?";
}

struct AdviceOrigin {
    std::string aspect;
    AdviceKind kind = AdviceKind::Before;
    bool operator==(const AdviceOrigin&) const = default;
};

/// `label` is the executed action (method name for calls, the atomic label,
/// `throw:<Exception>`) or the condition of a Branch. `call` is set for
/// external call actions, `advice` for nodes that come from advice bodies,
/// `props` holds the `@prop` annotations of the enclosing method.
struct CfgNode {
    std::size_t id = 0;
    NodeKind kind = NodeKind::Action;
    std::string label;
    std::optional<AdviceOrigin> advice;
    std::optional<Signature> call;
    std::vector<std::string> props;
    bool operator==(const CfgNode&) const = default;
};

struct CfgEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    Guard guard = Guard::Epsilon;
    auto operator<=>(const CfgEdge&) const = default;
};

/// Nodes are stored by id (`nodes[i].id == i`); edges are sorted.
struct Cfg {
    std::string method;
    std::vector<CfgNode> nodes;
    std::vector<CfgEdge> edges;
    std::size_t entry = 0;
    std::size_t exit = 0;
    std::optional<std::size_t> error;
    bool operator==(const Cfg&) const = default;

    std::vector<std::size_t> successors(std::size_t id) const {
        std::vector<std::size_t> out;
        for (const auto& e : edges)
            if (e.from == id) out.push_back(e.to);
        return out;
    }
};

namespace detail {

class CfgBuilder {
public:
    CfgBuilder(const WovenProgram& woven, int depth_limit)
        : woven_(woven), prog_(woven.program()), depth_limit_(depth_limit) {}

    Cfg build(const std::string& qualified) {
        const MethodDecl* method = prog_.find_method(qualified);
        if (!method) throw UnknownMethod(qualified);

        entry_ = add(NodeKind::Entry, "", {});
        exit_ = add(NodeKind::Exit, "", {});
        stack_.push_back(qualified);
        Frame frame{qualified, std::nullopt, props_of(*method), nullptr, nullptr};
        const Pending out = block(method->body, frame, {{entry_, Guard::Epsilon}}, {});
        connect(out, exit_);
        stack_.pop_back();
        return finish(qualified);
    }

private:
    using Pending = std::vector<std::pair<std::size_t, Guard>>;
    using Proceed = std::function<Pending(Pending)>;

    struct Frame {
        std::string owner;
        std::optional<AdviceOrigin> origin;
        std::vector<std::string> props;
        Pending* returns; // null: return goes to Exit
        const Proceed* proceed;
    };

    struct RawEdge {
        std::size_t from;
        std::size_t to;
        Guard guard;
    };

    const WovenProgram& woven_;
    const Program& prog_;
    int depth_limit_;
    std::vector<CfgNode> nodes_;
    std::vector<RawEdge> edges_;
    std::size_t entry_ = 0;
    std::size_t exit_ = 0;
    std::optional<std::size_t> error_;
    std::vector<std::string> stack_;

    static std::vector<std::string> props_of(const MethodDecl& m) {
        return {m.annotations.begin(), m.annotations.end()};
    }

    std::size_t add(NodeKind kind, std::string label, const Frame* frame,
                    std::optional<Signature> call = std::nullopt) {
        CfgNode n;
        n.id = nodes_.size();
        n.kind = kind;
        n.label = std::move(label);
        n.call = std::move(call);
        if (frame) {
            n.advice = frame->origin;
            n.props = frame->props;
        }
        nodes_.push_back(std::move(n));
        return nodes_.back().id;
    }

    void connect(const Pending& from, std::size_t to) {
        for (const auto& [src, guard] : from) edges_.push_back({src, to, guard});
    }

    std::size_t error_node() {
        if (!error_) error_ = add(NodeKind::Error, "", nullptr);
        return *error_;
    }

    void enter(const std::string& name) {
        const auto hit = std::find(stack_.begin(), stack_.end(), name);
        if (hit != stack_.end()) {
            std::vector<std::string> cycle(hit, stack_.end());
            cycle.push_back(name);
            throw RecursionError(std::move(cycle));
        }
        if (static_cast<int>(stack_.size()) > depth_limit_) throw DepthError(name, depth_limit_);
        stack_.push_back(name);
    }

    Pending block(const Block& body, const Frame& frame, Pending in, std::vector<int> path) {
        for (std::size_t i = 0; i < body.size(); ++i) {
            path.push_back(static_cast<int>(i));
            in = stmt(body[i], frame, std::move(in), path);
            path.pop_back();
        }
        return in;
    }

    // Emits the nodes evaluating a condition; returns (loop head, branch).
    std::pair<std::size_t, std::size_t> condition(const Condition& cond, const Frame& frame,
                                                  const Pending& in) {
        if (const auto* c = std::get_if<CallExpr>(&cond)) {
            const auto check = add(NodeKind::Action, c->method, &frame,
                                   Signature{c->receiver, c->method, c->arg_count});
            connect(in, check);
            const auto branch = add(NodeKind::Branch, c->method, &frame);
            connect({{check, Guard::Epsilon}}, branch);
            return {check, branch};
        }
        const auto branch = add(NodeKind::Branch, std::get<CondLabel>(cond).label, &frame);
        connect(in, branch);
        return {branch, branch};
    }

    Pending stmt(const Stmt& s, const Frame& frame, Pending in, std::vector<int>& path) {
        return std::visit(
            overloaded{
                [&](const CallExpr& c) { return call_site(c, frame, std::move(in), path); },
                [&](const AtomicStmt& a) {
                    const auto n = add(NodeKind::Action, a.label, &frame);
                    connect(in, n);
                    return Pending{{n, Guard::Epsilon}};
                },
                [&](const ThrowStmt& t) {
                    const auto n = add(NodeKind::Action, "throw:" + t.exception, &frame);
                    connect(in, n);
                    connect({{n, Guard::Epsilon}}, error_node());
                    return Pending{};
                },
                [&](const ReturnStmt&) {
                    if (frame.returns) {
                        frame.returns->insert(frame.returns->end(), in.begin(), in.end());
                    } else {
                        connect(in, exit_);
                    }
                    return Pending{};
                },
                [&](const ProceedStmt&) {
                    return frame.proceed ? (*frame.proceed)(std::move(in)) : in;
                },
                [&](const IfStmt& st) {
                    const auto [head, branch] = condition(st.cond, frame, in);
                    (void)head;
                    path.push_back(0);
                    Pending out = block(st.then_branch, frame, {{branch, Guard::Then}}, path);
                    path.back() = 1;
                    Pending other = st.else_branch
                                        ? block(*st.else_branch, frame, {{branch, Guard::Else}}, path)
                                        : Pending{{branch, Guard::Else}};
                    path.pop_back();
                    out.insert(out.end(), other.begin(), other.end());
                    return out;
                },
                [&](const WhileStmt& st) {
                    const auto [head, branch] = condition(st.cond, frame, in);
                    path.push_back(0);
                    connect(block(st.body, frame, {{branch, Guard::Then}}, path), head);
                    path.pop_back();
                    return Pending{{branch, Guard::Else}};
                },
            },
            s.node);
    }

    Pending call_site(const CallExpr& c, const Frame& frame, Pending in,
                      const std::vector<int>& path) {
        const auto order = execution_order(woven_.bindings_at(frame.owner, path));
        std::vector<AdviceBinding> arounds;
        for (const auto& b : order) {
            if (b.kind == AdviceKind::Before) in = advice(b, std::move(in), nullptr);
            if (b.kind == AdviceKind::Around) arounds.push_back(b);
        }
        in = around_chain(arounds, 0, c, frame, std::move(in));
        for (const auto& b : order)
            if (b.kind == AdviceKind::After) in = advice(b, std::move(in), nullptr);
        return in;
    }

    Pending around_chain(const std::vector<AdviceBinding>& chain, std::size_t i, const CallExpr& c,
                         const Frame& frame, Pending in) {
        if (i == chain.size()) return plain_call(c, frame, std::move(in));
        const Proceed inner = [&, i](Pending p) {
            return around_chain(chain, i + 1, c, frame, std::move(p));
        };
        return advice(chain[i], std::move(in), &inner);
    }

    Pending advice(const AdviceBinding& b, Pending in, const Proceed* proceed) {
        const auto* aspect = prog_.find_aspect(b.aspect);
        const auto& decl = aspect->advice.at(static_cast<std::size_t>(b.advice_ordinal));
        const auto owner = advice_owner(b.aspect, b.kind, b.advice_ordinal);
        enter(owner);
        Pending returns;
        Frame inner{owner, AdviceOrigin{b.aspect, b.kind}, {}, &returns, proceed};
        Pending out = block(decl.body, inner, std::move(in), {});
        stack_.pop_back();
        out.insert(out.end(), returns.begin(), returns.end());
        return out;
    }

    Pending plain_call(const CallExpr& c, const Frame& frame, Pending in) {
        const auto* type = prog_.find_type(c.receiver);
        if (!type) {
            const auto n = add(NodeKind::Action, c.method, &frame,
                               Signature{c.receiver, c.method, c.arg_count});
            connect(in, n);
            return {{n, Guard::Epsilon}};
        }
        const auto qualified = c.receiver + "." + c.method;
        const auto* callee = type->find_method(c.method);
        if (!callee) throw UnknownMethod(qualified);
        enter(qualified);
        Pending returns;
        Frame inner{qualified, std::nullopt, props_of(*callee), &returns, nullptr};
        Pending out = block(callee->body, inner, std::move(in), {});
        stack_.pop_back();
        out.insert(out.end(), returns.begin(), returns.end());
        return out;
    }

    // Drops unreachable nodes and renumbers by depth-first preorder from
    // entry (then-successor before else). Exit is kept even when every path
    // throws, and then takes the last id.
    Cfg finish(const std::string& qualified) {
        std::vector<std::vector<RawEdge>> out(nodes_.size());
        for (const auto& e : edges_) out[e.from].push_back(e);
        for (auto& list : out)
            std::stable_sort(list.begin(), list.end(),
                             [](const RawEdge& x, const RawEdge& y) { return x.guard < y.guard; });

        constexpr auto unset = static_cast<std::size_t>(-1);
        std::vector<std::size_t> renum(nodes_.size(), unset);
        std::size_t next = 0;
        std::vector<std::size_t> stack{entry_};
        while (!stack.empty()) {
            const auto n = stack.back();
            stack.pop_back();
            if (renum[n] != unset) continue;
            renum[n] = next++;
            for (auto it = out[n].rbegin(); it != out[n].rend(); ++it)
                if (renum[it->to] == unset) stack.push_back(it->to);
        }
        if (renum[exit_] == unset) renum[exit_] = next++;

        Cfg cfg;
        cfg.method = qualified;
        cfg.nodes.resize(next);
        for (std::size_t old = 0; old < nodes_.size(); ++old) {
            if (renum[old] == unset) continue;
            cfg.nodes[renum[old]] = nodes_[old];
            cfg.nodes[renum[old]].id = renum[old];
        }
        for (const auto& e : edges_)
            if (renum[e.from] != unset) cfg.edges.push_back({renum[e.from], renum[e.to], e.guard});
        std::sort(cfg.edges.begin(), cfg.edges.end());
        cfg.edges.erase(std::unique(cfg.edges.begin(), cfg.edges.end()), cfg.edges.end());
        cfg.entry = renum[entry_];
        cfg.exit = renum[exit_];
        if (error_ && renum[*error_] != unset) cfg.error = renum[*error_];
        return cfg;
    }
};

inline std::string dot_escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace detail

/// Control-flow graph of one method with advice expanded at every join point
/// and in-program callees inlined.
inline Cfg build_cfg(const WovenProgram& woven, const std::string& method, int inline_depth_limit = 16) {
    return detail::CfgBuilder(woven, inline_depth_limit).build(method);
}

inline std::string display_label(const CfgNode& n) {
    switch (n.kind) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Exit: return "exit";
    case NodeKind::Error: return "error";
    case NodeKind::Branch: return n.label + "?";
    case NodeKind::Action:
        if (n.call) return "call:" + n.call->receiver + "." + n.call->method;
        return n.label;
    }
    return n.label;
}

inline std::string to_dot(const Cfg& cfg) {
    std::ostringstream os;
    os << "digraph \"" << detail::dot_escape(cfg.method) << "\" {\n";
    for (const auto& n : cfg.nodes) {
        const char* shape = n.kind == NodeKind::Branch   ? "diamond"
                            : n.kind == NodeKind::Action ? "box"
                                                         : "ellipse";
        os << "  n" << n.id << " [shape=" << shape << ", label=\""
           << detail::dot_escape(display_label(n)) << "\"";
        if (n.advice) os << ", group=\"" << detail::dot_escape(n.advice->aspect) << "\"";
        os << "];\n";
    }
    for (const auto& e : cfg.edges) {
        os << "  n" << e.from << " -> n" << e.to;
        if (e.guard != Guard::Epsilon) os << " [label=\"" << to_string(e.guard) << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace osm
