#include <gtest/gtest.h>

#include <queue>

#include "ctl_oracle.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace osm;

namespace {

KripkeStructure corpus_model() {
    return from_cfg(build_cfg(weave(support::ehr_program()), support::kRequest));
}

std::vector<bool> bits(const StateSet& s) {
    std::vector<bool> out(s.universe());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.contains(i);
    return out;
}

Formula un(Op op, Formula a) { return Formula::unary(op, std::move(a)); }

bool is_path(const KripkeStructure& m, const std::vector<std::size_t>& p) {
    if (p.empty()) return false;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const auto& succ = m.successors(p[i - 1]);
        if (std::find(succ.begin(), succ.end(), p[i]) == succ.end()) return false;
    }
    return true;
}

// Lasso sanity: prefix+cycle is a path, the cycle closes and stays inside `inside`.
void expect_lasso(const KripkeStructure& m, const Lasso& l, const StateSet& inside) {
    ASSERT_FALSE(l.cycle.empty());
    auto full = l.prefix;
    full.insert(full.end(), l.cycle.begin(), l.cycle.end());
    EXPECT_TRUE(is_path(m, full));
    EXPECT_TRUE(m.is_initial(full.front()));
    const auto& back = m.successors(l.cycle.back());
    EXPECT_NE(std::find(back.begin(), back.end(), l.cycle.front()), back.end());
    for (const auto s : full) EXPECT_TRUE(inside.contains(s));
}

} // namespace

TEST(SatSet, Examples) {
    const auto m = corpus_model();
    EXPECT_EQ(sat_set(m, parse_ctl("AG true")).count(), m.size());
    EXPECT_TRUE(sat_set(m, parse_ctl("EF error")).contains(m.initial().front()));
    EXPECT_TRUE(sat_set(m, parse_ctl("!E[!action:isUserAuthorized U action:fetch]")).contains(m.initial().front()));
    EXPECT_FALSE(sat_set(m, parse_ctl("AF exit")).contains(m.initial().front()));
    EXPECT_TRUE(sat_set(m, parse_ctl("AF terminated")).contains(m.initial().front()));
    EXPECT_TRUE(sat_set(m, parse_ctl("AG (action:fetch -> AF action:encrypt)")).contains(m.initial().front()));
}

TEST(SatSet, UnknownAtoms) {
    const auto m = corpus_model();
    EXPECT_EQ(sat_set(m, parse_ctl("nope:thing")).count(), 0u);
    EXPECT_EQ(unknown_atoms(m, parse_ctl("EF (exit & nope:thing)")), std::vector<std::string>{"nope:thing"});
    EXPECT_THROW(sat_set(m, parse_ctl("EF nope:thing"), {true}), UnknownAtom);
    EXPECT_NO_THROW(sat_set(m, parse_ctl("EF exit"), {true}));
}

TEST(CheckCtl, FailingAgGivesShortestPath) {
    const auto m = corpus_model();
    const auto r = check_ctl(m, parse_ctl("AG (action:fetch -> false)"));
    EXPECT_FALSE(r.holds);
    ASSERT_TRUE(std::holds_alternative<FinitePath>(r.evidence));
    const auto& p = std::get<FinitePath>(r.evidence).states;
    EXPECT_TRUE(is_path(m, p));
    EXPECT_TRUE(m.is_initial(p.front()));
    EXPECT_TRUE(m.has_label(p.back(), "action:fetch"));
}

TEST(CheckCtl, WitnessesAndLassos) {
    const auto m = corpus_model();
    const auto ef = check_ctl(m, parse_ctl("EF exit"));
    EXPECT_TRUE(ef.holds);
    ASSERT_TRUE(std::holds_alternative<FinitePath>(ef.evidence));
    const auto& w = std::get<FinitePath>(ef.evidence).states;
    EXPECT_TRUE(is_path(m, w));
    EXPECT_TRUE(m.has_label(w.back(), "exit"));

    const auto ex = check_ctl(m, parse_ctl("EX action:isUserAuthorized"));
    EXPECT_TRUE(ex.holds);
    EXPECT_EQ(std::get<FinitePath>(ex.evidence).states.size(), 2u);

    const auto af = check_ctl(m, parse_ctl("AF exit"));
    EXPECT_FALSE(af.holds);
    ASSERT_TRUE(std::holds_alternative<Lasso>(af.evidence));
    expect_lasso(m, std::get<Lasso>(af.evidence), sat_set(m, parse_ctl("EG !exit")));

    const auto eg = check_ctl(m, parse_ctl("EG !exit"));
    EXPECT_TRUE(eg.holds);
    ASSERT_TRUE(std::holds_alternative<Lasso>(eg.evidence));
    expect_lasso(m, std::get<Lasso>(eg.evidence), sat_set(m, parse_ctl("!exit")));

    const auto ok = check_ctl(m, parse_ctl("entry"));
    EXPECT_TRUE(ok.holds);
    EXPECT_TRUE(std::holds_alternative<std::monostate>(ok.evidence));
}

TEST(SatSet, AgreesWithNaiveSemantics) {
    gen::Rng rng(61);
    for (int i = 0; i < 2000; ++i) {
        const auto m = gen::kripke(rng);
        const auto f = gen::formula(rng, 4);
        EXPECT_EQ(bits(sat_set(m, f)), oracle::NaiveCtl(m).eval(f)) << to_string(f);
    }
}

TEST(SatSet, ComplementAndDualities) {
    gen::Rng rng(67);
    for (int i = 0; i < 500; ++i) {
        const auto m = gen::kripke(rng);
        const auto f = gen::formula(rng, 3);
        const auto sf = sat_set(m, f);
        EXPECT_EQ(sat_set(m, un(Op::Not, f)), sf.complement());
        EXPECT_EQ(sat_set(m, un(Op::AG, f)), sat_set(m, un(Op::EF, un(Op::Not, f))).complement());
        EXPECT_EQ(sat_set(m, un(Op::EF, f)), sat_set(m, Formula::binary(Op::EU, Formula::constant(true), f)));
        EXPECT_EQ(sat_set(m, un(Op::AF, f)), sat_set(m, un(Op::EG, un(Op::Not, f))).complement());
    }
}

// X = sat(EG f) is closed, inside sat(f), and no larger closed set exists.
TEST(SatSet, EgIsGreatestFixpoint) {
    gen::Rng rng(71);
    for (int i = 0; i < 300; ++i) {
        const auto m = gen::kripke(rng);
        const auto f = gen::formula(rng, 2);
        const auto body = sat_set(m, f);
        const auto x = sat_set(m, un(Op::EG, f));
        auto closed = [&](const std::vector<std::size_t>& set) {
            std::vector<bool> in(m.size(), false);
            for (const auto s : set) in[s] = true;
            for (const auto s : set) {
                bool ok = false;
                for (const auto t : m.successors(s)) ok = ok || in[t];
                if (!ok) return false;
            }
            return true;
        };
        const auto xs = x.members();
        for (const auto s : xs) EXPECT_TRUE(body.contains(s));
        EXPECT_TRUE(closed(xs));
        const auto candidates = body.members();
        const auto k = candidates.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            std::vector<std::size_t> set;
            for (std::size_t b = 0; b < k; ++b)
                if (mask >> b & 1) set.push_back(candidates[b]);
            if (set.size() <= xs.size()) continue;
            if (!std::includes(set.begin(), set.end(), xs.begin(), xs.end())) continue;
            EXPECT_FALSE(closed(set));
        }
    }
}

TEST(CheckCtl, EvidenceIsValid) {
    gen::Rng rng(73);
    int paths = 0, lassos = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = gen::kripke(rng);
        const auto body = gen::formula(rng, 2, false);
        static const std::vector<Op> kOps{Op::EX, Op::AX, Op::EF, Op::AF, Op::EG, Op::AG, Op::EU, Op::AU};
        const Op op = gen::pick(rng, kOps);
        const auto f = op == Op::EU || op == Op::AU ? Formula::binary(op, body, gen::formula(rng, 2, false))
                                                    : un(op, body);
        const auto r = check_ctl(m, f);
        const auto sat = sat_set(m, f);
        bool all_initial = true;
        for (const auto s : m.initial()) all_initial = all_initial && sat.contains(s);
        EXPECT_EQ(r.holds, all_initial);
        if (const auto* p = std::get_if<FinitePath>(&r.evidence)) {
            ++paths;
            EXPECT_TRUE(is_path(m, p->states));
            EXPECT_TRUE(m.is_initial(p->states.front()));
            const auto end = p->states.back();
            const auto lhs = sat_set(m, f.lhs());
            switch (op) {
            case Op::EF: EXPECT_TRUE(r.holds && lhs.contains(end)); break;
            case Op::EX: EXPECT_TRUE(r.holds && lhs.contains(end) && p->states.size() == 2); break;
            case Op::AX: EXPECT_TRUE(!r.holds && !lhs.contains(end) && p->states.size() == 2); break;
            case Op::AG: EXPECT_TRUE(!r.holds && !lhs.contains(end)); break;
            case Op::EU:
                EXPECT_TRUE(sat_set(m, f.rhs()).contains(end));
                for (std::size_t k = 0; k + 1 < p->states.size(); ++k) EXPECT_TRUE(lhs.contains(p->states[k]));
                break;
            case Op::AU: {
                const auto q = sat_set(m, f.rhs());
                EXPECT_FALSE(q.contains(end) || lhs.contains(end));
                for (const auto s : p->states) EXPECT_FALSE(q.contains(s));
                break;
            }
            default: ADD_FAILURE() << "unexpected path evidence";
            }
        } else if (const auto* l = std::get_if<Lasso>(&r.evidence)) {
            ++lassos;
            switch (op) {
            case Op::EG: expect_lasso(m, *l, sat); break;
            case Op::AF: expect_lasso(m, *l, sat_set(m, un(Op::EG, un(Op::Not, f.lhs())))); break;
            case Op::AU: expect_lasso(m, *l, sat_set(m, un(Op::EG, un(Op::Not, f.rhs())))); break;
            default: ADD_FAILURE() << "unexpected lasso evidence";
            }
        } else {
            const bool witness_shape = op == Op::EX || op == Op::EF || op == Op::EU || op == Op::EG;
            EXPECT_FALSE(r.holds ? witness_shape : !witness_shape) << to_string(f);
        }
    }
    EXPECT_GT(paths, 100);
    EXPECT_GT(lassos, 50);
}
