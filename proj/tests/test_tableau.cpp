#include "doctest.h"
#include "models.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include "colmu/parser.hpp"
#include "colmu/tableau_game.hpp"

#include <map>
#include <set>

using namespace colmu;

namespace {

Sequent root_of(const SatResult& r) { return r.game->closure().root_sequent(); }

SatResult sat(const std::string& text, const Signature& sig) { return decide_sat(parse(text, sig), sig); }

struct Corpus {
    Signature sig;
    Formula a;
};

std::vector<Corpus> random_corpus(int per_logic, int depth, std::size_t max_closure, std::uint64_t seed) {
    std::vector<Corpus> out;
    for (auto sig : {Signature::kripke(), Signature::monotone(), Signature::coalition(2), Signature::graded(),
                     Signature::probabilistic()}) {
        testsupport::FormulaGen gen(sig, seed + static_cast<int>(sig.logic));
        for (int i = 0; i < per_logic;) {
            Formula a = make_clean(gen(depth));
            if (ClosureIndex(Sequent{a}).size() > max_closure) continue;
            out.push_back({sig, a});
            ++i;
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("tableau_game") {
    TEST_CASE("game examples") {
        auto k = Signature::kripke();
        {
            TableauGame g(Sequent{parse("p & ~p", k)}, k);
            auto& arena = g.arena();
            // (p & ~p) -> (and) -> {p, ~p} -> axiom, which has no moves
            REQUIRE(arena.size() == 4);
            CHECK(arena.owner[3] == Player::Exists);
            CHECK(g.blueprint(3).kind == BlueprintKind::Axiom);
            CHECK(arena.moves[3].empty());
            CHECK(solve(arena).winner[0] == Player::Forall);
        }
        {
            TableauGame g(Sequent{parse("p", k)}, k);
            CHECK(g.arena().size() == 1);
            CHECK(g.arena().moves[0].empty());
            CHECK(solve(g.arena()).winner[0] == Player::Exists);
        }
        {
            // automaton states advance along the chosen conclusion
            TableauGame g(Sequent{parse("mu X. dia X", k)}, k);
            const auto& arena = g.arena();
            for (Position v = 0; v < arena.size(); ++v) {
                if (arena.owner[v] != Player::Exists) continue;
                const auto& info = g.info(v);
                auto concl = conclusions(g.closure(), g.sequent(info.sequent), g.blueprint(v));
                REQUIRE(concl.size() == arena.moves[v].size());
                for (std::size_t i = 0; i < concl.size(); ++i) {
                    const auto& w = g.info(arena.moves[v][i]);
                    CHECK(g.sequent(w.sequent) == concl[i]);
                    auto rel = trace_relation(g.closure(), g.sequent(info.sequent), g.blueprint(v), i);
                    CHECK(w.state == g.automaton().step(info.state, rel));
                }
            }
        }
    }

    TEST_CASE("verdict examples") {
        auto k = Signature::kripke();
        CHECK_FALSE(sat("p & ~p", k).satisfiable);
        CHECK(sat("p", k).satisfiable);
        CHECK_FALSE(sat("mu X. dia X", k).satisfiable);
        CHECK(sat("nu X. box X", k).satisfiable);
        CHECK(sat("nu X. dia X", k).satisfiable);
        CHECK_FALSE(sat("mu X. (p | dia X) & nu Y. (~p & box Y)", k).satisfiable);
        CHECK_THROWS_AS(decide_sat(Formula::mu("X", Formula::var("X")), k), FormulaError);
        auto r = sat("p & ~p", k);
        REQUIRE(r.tableau);
        CHECK(r.tableau->nodes.size() == 2);
        CHECK(r.tableau->nodes[0].annotation->kind == BlueprintKind::And);
        CHECK(r.tableau->nodes[1].annotation->kind == BlueprintKind::Axiom);
    }

    TEST_CASE("coalition example") {
        auto c3 = Signature::coalition(3);
        auto r = sat("[{1}] nu X.(p & <{1,2,3}> X) & [{2}] mu Y.(~p | [{2}] Y)", c3);
        REQUIRE_FALSE(r.satisfiable);
        const Tableau& t = *r.tableau;
        Sequent g = root_of(r);
        CHECK_FALSE(verify_closed(t, g, c3));
        const ClosureIndex& cl = r.game->closure();
        for (const auto& n : t.nodes)
            for (const auto& f : n.label) CHECK(cl.find(f));

        // a single loop, re-entering the fixpoint block
        auto cycles = testsupport::tableau_cycles(t);
        REQUIRE(cycles.size() == 1);
        auto order = testsupport::simple_cycle_order(t, cycles[0]);
        REQUIRE(order.size() == cycles[0].size());
        bool has_fix = false, has_modal = false;
        for (auto v : order) {
            has_fix |= t.nodes[v].annotation->kind == BlueprintKind::Fix;
            has_modal |= t.nodes[v].annotation->kind == BlueprintKind::Modal;
        }
        CHECK(has_fix);
        CHECK(has_modal);

        // the bad traces on the loop all peak at the mu binder's priority
        int mu_prio = cl.parity().of_binder(cl.root_sequent()[0].right().arg().name());
        CHECK(mu_prio == 1);
        auto peaks = testsupport::bad_trace_peaks(t, cl, order, c3);
        CHECK(peaks == std::set<int>{1});
    }

    TEST_CASE("verifier rejections") {
        auto k = Signature::kripke();
        {
            Formula f = parse("p | q", k);
            Tableau t;
            t.nodes.push_back({Sequent{f}, std::nullopt});
            auto d = verify_closed(t, Sequent{f}, k);
            REQUIRE(d);
            CHECK(d->find("a rule applies") != std::string::npos);
        }
        {
            Formula f = parse("p", k);
            Tableau t;
            t.nodes.push_back({Sequent{f}, std::nullopt});
            auto d = verify_closed(t, Sequent{f}, k);
            REQUIRE(d);
            CHECK(d->find("open leaf") != std::string::npos);
        }
        {
            // nu X. dia X looping through its unfolding
            Formula f = parse("nu X. dia X", k);
            Formula u = unfold(f);
            auto rule = instantiate_rule(Schema::K, {u.modality()}, 1, {}, {}, 0, k);
            REQUIRE(rule);
            Tableau t;
            t.nodes.push_back({Sequent{f}, Blueprint{BlueprintKind::Fix, f, {}, nullptr, {}}});
            t.nodes.push_back({Sequent{u}, Blueprint{BlueprintKind::Modal, {}, {}, std::make_shared<OneStepRule>(*rule), {u}}});
            t.edges = {{0, 1, 0}, {1, 0, 0}};
            auto d = verify_closed(t, Sequent{f}, k);
            REQUIRE(d);
            CHECK(d->find("without bad trace") != std::string::npos);
            // the same shape for mu is closed
            Formula g = parse("mu X. dia X", k);
            Formula v = unfold(g);
            t.nodes[0] = {Sequent{g}, Blueprint{BlueprintKind::Fix, g, {}, nullptr, {}}};
            t.nodes[1] = {Sequent{v}, Blueprint{BlueprintKind::Modal, {}, {}, std::make_shared<OneStepRule>(*rule), {v}}};
            CHECK_FALSE(verify_closed(t, Sequent{g}, k));
        }
        {
            auto c3 = Signature::coalition(3);
            auto r = sat("[{1}] nu X.(p & <{1,2,3}> X) & [{2}] mu Y.(~p | [{2}] Y)", c3);
            auto other = prepare_root(parse("[{1}] nu X.(p & <{1,2,3}> X) & [{3}] mu Y.(~p | [{2}] Y)", c3));
            auto d = verify_closed(*r.tableau, other, c3);
            REQUIRE(d);
            CHECK(d->find("root label") != std::string::npos);
            // rule instances are re-checked: overlapping coalitions are no (C1) instance
            Tableau t = *r.tableau;
            bool tampered = false;
            for (auto& n : t.nodes) {
                if (!n.annotation || n.annotation->kind != BlueprintKind::Modal) continue;
                auto rule = std::make_shared<OneStepRule>(*n.annotation->rule);
                rule->schema = rule->schema == Schema::C1 ? Schema::C2 : Schema::C1;
                n.annotation->rule = rule;
                tampered = true;
            }
            REQUIRE(tampered);
            CHECK(verify_closed(t, root_of(r), c3));
        }
    }

    TEST_CASE("tableau json") {
        auto c3 = Signature::coalition(3);
        auto r = sat("[{1}] nu X.(p & <{1,2,3}> X) & [{2}] mu Y.(~p | [{2}] Y)", c3);
        std::string text = tableau_to_json(*r.tableau);
        Tableau back = tableau_from_json(text, c3);
        CHECK(tableau_to_json(back) == text);
        CHECK_FALSE(verify_closed(back, root_of(r), c3));
        CHECK_THROWS_AS(tableau_from_json("{}", c3), TableauFormatError);
        CHECK_THROWS_AS(tableau_from_json("[", c3), TableauFormatError);
        CHECK_THROWS_AS(tableau_from_json(R"({"nodes":[{"id":0,"label":["p"],"x":1}],"edges":[],"root":0})", c3),
                        TableauFormatError);
        CHECK_THROWS_AS(tableau_from_json(R"({"nodes":[{"id":0,"label":["p"]}],"edges":[],"root":3})", c3),
                        TableauFormatError);

        auto g = Signature::graded();
        auto rg = sat("<1> p & [0] ~p", g);
        REQUIRE_FALSE(rg.satisfiable);
        std::string gt = tableau_to_json(*rg.tableau);
        CHECK(gt.find("\"code\"") != std::string::npos);
        CHECK_FALSE(verify_closed(tableau_from_json(gt, g), root_of(rg), g));
        auto pr = Signature::probabilistic();
        auto rp = sat("<1/2> p & <2/3> ~p", pr);
        REQUIRE_FALSE(rp.satisfiable);
        CHECK_FALSE(verify_closed(tableau_from_json(tableau_to_json(*rp.tableau), pr), root_of(rp), pr));
    }

    TEST_CASE("determinism") {
        auto c3 = Signature::coalition(3);
        std::string f = "[{1}] nu X.(p & <{1,2,3}> X) & [{2}] mu Y.(~p | [{2}] Y)";
        CHECK(tableau_to_json(*sat(f, c3).tableau) == tableau_to_json(*sat(f, c3).tableau));
        auto a = sat("nu X. (p & dia X) & dia ~p", Signature::kripke());
        auto b = sat("nu X. (p & dia X) & dia ~p", Signature::kripke());
        CHECK(a.solution.strategy == b.solution.strategy);
    }

    TEST_CASE("ceiling") {
        GameOptions o;
        o.max_positions = 5;
        CHECK_THROWS_AS(decide_sat(parse("mu X. (p | dia X) & nu Y. (~p & box Y)", Signature::kripke()),
                                   Signature::kripke(), o),
                        CeilingExceeded);
    }

    TEST_CASE("unsat verdicts carry closed tableaux and never contradict eval") {
        auto corpus = random_corpus(150, 6, 14, 11);
        std::mt19937_64 rng(5);
        int unsat = 0;
        for (const auto& c : corpus) {
            auto r = decide_sat(c.a, c.sig);
            auto neg = decide_sat(negate(c.a), c.sig);
            CHECK((r.satisfiable || neg.satisfiable));
            double bound = r.game->size_bound();
            CHECK(static_cast<double>(r.game->arena().size()) <= bound);
            if (r.satisfiable) continue;
            ++unsat;
            auto d = verify_closed(*r.tableau, root_of(r), c.sig);
            CHECK_MESSAGE(!d, to_string(c.a) << ": " << d.value_or(""));
            for (int k = 0; k < 3; ++k) {
                auto m = testsupport::random_model(c.sig, rng, 3);
                CHECK_MESSAGE(eval(m, c.a).none(), to_string(c.a));
            }
        }
        CHECK(unsat > 20);
    }

    TEST_CASE("kripke brute force: a model with at most three states means SAT") {
        auto k = Signature::kripke();
        testsupport::FormulaGen gen(k, 21);
        int checked = 0, unsat = 0;
        while (checked < 300) {
            Formula a = make_clean(gen(5));
            if (ClosureIndex(Sequent{a}).size() > 6) continue;
            ++checked;
            if (decide_sat(a, k).satisfiable) continue;
            ++unsat;
            auto fv = free_variables(a);
            std::vector<std::string> vars(fv.begin(), fv.end());
            for (int n = 1; n <= 3; ++n)
                CHECK_FALSE_MESSAGE(testsupport::any_kripke_model(n, vars, [&](const CoalgebraModel& m) { return eval(m, a).any(); }),
                                    to_string(a));
        }
        CHECK(unsat > 5);
    }
}
