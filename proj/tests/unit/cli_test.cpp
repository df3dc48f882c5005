#include <gtest/gtest.h>

#include "support.hpp"

using namespace osm;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "osm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string props() { return (support::corpus() / "ehr.props").string(); }

} // namespace

TEST(Cli, CheckExitCodes) {
    EXPECT_EQ(run({"check", support::ehr().string(), "--props", props()}).code, 0);

    support::CorpusCopy no_logging({"logging.osm"});
    const auto r = run({"check", no_logging.dir().string(), "--props", props()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("warning:"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "fail");

    const auto missing = run({"check", (support::corpus() / "missing.osm").string()});
    EXPECT_EQ(missing.code, 2);
    EXPECT_EQ(missing.err.rfind("osm: ", 0), 0u);
    EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"kripke", support::kRequest, support::ehr().string(), "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"weave", support::ehr().string(), "--alias", "broken"}).code, 2);
}

TEST(Cli, ReportsAreByteIdentical) {
    const auto a = run({"check", support::ehr().string(), "--props", props()});
    const auto b = run({"check", support::ehr().string(), "--props", props()});
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Cli, OutFile) {
    support::CorpusCopy scratch;
    const auto file = scratch.dir() / "report.json";
    const auto r = run({"check", support::ehr().string(), "--props", props(), "--out", file.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(support::slurp(file), run({"check", support::ehr().string(), "--props", props()}).out);
}

TEST(Cli, KripkeJsonLoads) {
    const auto r = run({"kripke", support::kRequest, support::ehr().string()});
    ASSERT_EQ(r.code, 0);
    const auto model = load(r.out);
    EXPECT_EQ(model, from_cfg(build_cfg(weave(support::ehr_program()), support::kRequest)));
    const auto dot = run({"kripke", support::kRequest, support::ehr().string(), "--format", "dot"});
    EXPECT_EQ(dot.out.rfind("digraph kripke {", 0), 0u);
    EXPECT_EQ(run({"kripke", "Nope.m", support::ehr().string()}).code, 2);
}

TEST(Cli, Cfg) {
    const auto r = run({"cfg", support::kRequest, support::ehr().string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, to_dot(build_cfg(weave(support::ehr_program()), support::kRequest)));
}

TEST(Cli, Trace) {
    const auto dir = support::corpus() / "traces";
    const auto all = run({"trace", support::kRequest, dir.string(), support::ehr().string()});
    EXPECT_EQ(all.code, 1);
    const auto j = nlohmann::json::parse(all.out);
    EXPECT_EQ(j["conforming"], 2);
    EXPECT_EQ(j["total"], 3);
    EXPECT_EQ(j["fraction"], "2/3");

    const auto one = run({"trace", support::kRequest, (dir / "authorized.trace").string(), support::ehr().string()});
    EXPECT_EQ(one.code, 0);
    EXPECT_EQ(nlohmann::json::parse(one.out)["fraction"], "1");

    support::CorpusCopy scratch;
    { std::ofstream(scratch.dir() / "empty.trace") << "# nothing\n"; }
    const auto empty = run({"trace", support::kRequest, (scratch.dir() / "empty.trace").string(), support::ehr().string()});
    EXPECT_EQ(empty.code, 2);
    EXPECT_NE(empty.err.find("empty.trace"), std::string::npos);
}

TEST(Cli, Graph) {
    const auto r = run({"graph", "--props", props()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"C\" -> \"A\";"), std::string::npos);
    EXPECT_NE(r.out.find("\"A\" -> \"E\";"), std::string::npos);
    EXPECT_EQ(run({"graph"}).code, 2);
}

TEST(Cli, ParseAndWeave) {
    const auto p = run({"parse", support::ehr().string()});
    EXPECT_EQ(p.code, 0);
    EXPECT_NE(p.out.find("aspects: 4\n"), std::string::npos);
    EXPECT_NE(p.out.find("aspect Logging: pointcuts=1 before=1 after=1 around=0\n"), std::string::npos);

    const auto w = run({"weave", support::ehr().string(), "--alias", "Logging=L"});
    EXPECT_EQ(w.code, 0);
    EXPECT_NE(w.out.find("<- AccessControl.before#0 rank=0"), std::string::npos);
    EXPECT_NE(w.out.find("concern L = true\n"), std::string::npos);
    EXPECT_EQ(run({"weave", support::ehr().string(), "--alias", "Nope=N"}).code, 2);
}
