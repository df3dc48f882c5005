#include <gtest/gtest.h>

#include "generators.hpp"
#include "support.hpp"

using namespace osm;

namespace {

KripkeStructure corpus_model() {
    return from_cfg(build_cfg(weave(support::ehr_program()), support::kRequest));
}

} // namespace

TEST(FromCfg, Trivial) {
    const auto m = from_cfg(build_cfg(weave(parse("class A { m() {} }")), "A.m"));
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.transitions(), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}}));
    EXPECT_EQ(m.labels(0), (LabelSet{"entry"}));
    EXPECT_EQ(m.labels(1), (LabelSet{"exit", "terminated"}));
    EXPECT_EQ(m.initial(), std::vector<std::size_t>{0});
}

TEST(FromCfg, CorpusAuthorizedPath) {
    const auto m = corpus_model();
    // Follow the unique non-error successor from the initial state.
    std::vector<std::size_t> path{m.initial().front()};
    while (!m.has_label(path.back(), "terminated")) {
        const auto& succ = m.successors(path.back());
        std::size_t next = succ.front();
        for (const auto t : succ)
            if (!m.has_label(t, "action:throw:UnauthorizedAccessException")) next = t;
        path.push_back(next);
    }
    EXPECT_TRUE(m.has_label(path.back(), "exit"));
    EXPECT_EQ(support::actions_along(m, path),
              (std::vector<std::string>{"isUserAuthorized", "log-start", "fetch", "encrypt", "log-end"}));
}

TEST(FromCfg, StructureMatchesCfg) {
    const auto woven = weave(support::ehr_program());
    const auto cfg = build_cfg(woven, support::kRequest);
    const auto m = from_cfg(cfg);
    ASSERT_EQ(m.size(), cfg.nodes.size());
    std::set<std::pair<std::size_t, std::size_t>> want;
    for (const auto& e : cfg.edges) want.insert({e.from, e.to});
    want.insert({cfg.exit, cfg.exit});
    if (cfg.error) want.insert({*cfg.error, *cfg.error});
    const auto got = m.transitions();
    EXPECT_EQ(std::set(got.begin(), got.end()), want);

    for (const auto& n : cfg.nodes) {
        const auto& l = m.labels(n.id);
        EXPECT_GE(m.successors(n.id).size(), 1u);
        for (const auto& p : l) EXPECT_TRUE(valid_proposition(p)) << p;
        for (const auto* kind : {"before", "after", "around"})
            for (const auto* aspect : {"AccessControl", "Logging", "Encryption", "DataPrivacy"}) {
                const bool origin = n.advice && n.advice->aspect == aspect && to_string(n.advice->kind) == kind;
                EXPECT_EQ(l.count(std::string("advice:") + aspect + "." + kind) > 0, origin);
            }
        if (l.count("advice:Encryption.around")) {
            EXPECT_TRUE(l.count("aspect:Encryption"));
        }
        if (n.kind == NodeKind::Branch) {
            EXPECT_TRUE(l.count("action:branch:" + n.label));
        }
    }
}

TEST(FromCfg, LabelSoundnessOnRandomPrograms) {
    gen::Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        const auto g = gen::program(rng, {4, 10, true});
        const auto woven = weave(parse(g.text()));
        for (const auto& name : g.methods()) {
            Cfg cfg;
            try {
                cfg = build_cfg(woven, name);
            } catch (const RecursionError&) {
                continue;
            }
            const auto m = from_cfg(cfg);
            EXPECT_EQ(m.size(), cfg.nodes.size());
            std::set<std::pair<std::size_t, std::size_t>> distinct;
            for (const auto& e : cfg.edges) distinct.emplace(e.from, e.to);
            EXPECT_EQ(m.transition_count(), distinct.size() + (cfg.error ? 2 : 1));
            for (const auto& n : cfg.nodes) {
                std::size_t advice_labels = 0;
                for (const auto& l : m.labels(n.id)) advice_labels += l.rfind("advice:", 0) == 0;
                EXPECT_EQ(advice_labels, n.advice ? 1u : 0u);
            }
            EXPECT_EQ(load(emit(m, ModelFormat::Json)), m);
        }
    }
}

TEST(Emit, SelfLoopModel) {
    const KripkeStructure m({{"node:only"}}, {0}, {{0, 0}});
    const auto j = nlohmann::json::parse(emit(m, ModelFormat::Json));
    EXPECT_EQ(j["states"].size(), 1u);
    EXPECT_EQ(j["transitions"].size(), 1u);
    EXPECT_EQ(j["version"], 1);
    EXPECT_EQ(emit(m, ModelFormat::Json),
              "{\n  \"version\": 1,\n  \"states\": [\n    {\n      \"id\": 0,\n      \"labels\": [\n"
              "        \"node:only\"\n      ]\n    }\n  ],\n  \"initial\": [\n    0\n  ],\n"
              "  \"transitions\": [\n    [\n      0,\n      0\n    ]\n  ]\n}\n");
}

TEST(Emit, CorpusDeterministicAndCounted) {
    const auto m = corpus_model();
    const auto text = emit(m, ModelFormat::Json);
    EXPECT_EQ(emit(corpus_model(), ModelFormat::Json), text);
    const auto cfg = build_cfg(weave(support::ehr_program()), support::kRequest);
    EXPECT_EQ(nlohmann::json::parse(text)["states"].size(), cfg.nodes.size());
    const auto dot = emit(m, ModelFormat::Dot);
    EXPECT_EQ(dot, emit(m, ModelFormat::Dot));
    EXPECT_NE(dot.find("s0 [shape=doublecircle"), std::string::npos);
    EXPECT_EQ(dot.find("s1 [shape=doublecircle"), std::string::npos);
}

TEST(Load, RoundTrip) {
    const auto m = corpus_model();
    EXPECT_EQ(load(emit(m, ModelFormat::Json)), m);
    gen::Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        auto r = gen::kripke(rng);
        // rename atoms into the namespaced vocabulary
        std::vector<LabelSet> labels;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t s = 0; s < r.size(); ++s) {
            LabelSet l;
            for (const auto& a : r.labels(s)) l.insert("node:" + a);
            labels.push_back(l);
        }
        const KripkeStructure k(labels, r.initial(), r.transitions());
        EXPECT_EQ(load(emit(k, ModelFormat::Json)), k);
    }
}

TEST(Load, Errors) {
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[]},{"id":1,"labels":[]}],"initial":[0],"transitions":[[0,1]]})"),
                 TotalityError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[]}],"initial":[],"transitions":[[0,0]]})"),
                 EmptyInitialError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[]}],"transitions":[[0,0]]})"), SchemaError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[]}],"initial":[0],"transitions":[[0,0]],"extra":1})"),
                 SchemaError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[],"x":2}],"initial":[0],"transitions":[[0,0]]})"),
                 SchemaError);
    EXPECT_THROW(load(R"({"version":2,"states":[{"id":0,"labels":[]}],"initial":[0],"transitions":[[0,0]]})"),
                 SchemaError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":["bogus"]}],"initial":[0],"transitions":[[0,0]]})"),
                 SchemaError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":3,"labels":[]}],"initial":[0],"transitions":[[0,0]]})"),
                 SchemaError);
    EXPECT_THROW(load(R"({"version":1,"states":[{"id":0,"labels":[]}],"initial":[0],"transitions":[[0,5]]})"),
                 SchemaError);
    EXPECT_THROW(load("not json"), SchemaError);
}

TEST(Kripke, ConstructorInvariants) {
    EXPECT_THROW(KripkeStructure({{}}, {}, {{0, 0}}), EmptyInitialError);
    EXPECT_THROW(KripkeStructure({{}, {}}, {0}, {{0, 1}}), TotalityError);
    const KripkeStructure m({{"exit"}, {}}, {1, 1}, {{1, 0}, {0, 0}, {1, 0}});
    EXPECT_EQ(m.initial(), std::vector<std::size_t>{1});
    EXPECT_EQ(m.transition_count(), 2u);
    EXPECT_EQ(m.predecessors(0), (std::vector<std::size_t>{0, 1}));
}
