#include "doctest.h"
#include "lassos.hpp"

#include "colmu/parser.hpp"

using namespace colmu;

TEST_SUITE("trace_automaton") {
    TEST_CASE("trace relation clauses") {
        Formula a = Formula::var("a"), b = Formula::var("b"), c = Formula::var("c");
        Formula ab = Formula::disj(a, b);
        TraceTile t{Sequent{ab, c}, Blueprint{BlueprintKind::Or, ab, {}, nullptr, {}}, 1};
        auto r = trace_relation(t);
        CHECK(r.size() == 2);
        CHECK(std::find(r.begin(), r.end(), std::make_pair(ab, b)) != r.end());
        CHECK(std::find(r.begin(), r.end(), std::make_pair(c, c)) != r.end());

        auto mo = Signature::monotone();
        Sequent m{parse("box p", mo), parse("dia q", mo), Formula::var("r")};
        Blueprint modal;
        for (auto& bp : enumerate_blueprints(m, mo))
            if (bp.kind == BlueprintKind::Modal) modal = bp;
        auto rm = trace_relation(TraceTile{m, modal, 0});
        REQUIRE(rm.size() == 2);
        for (auto& [x, y] : rm) {
            CHECK(x.is_modal());
            CHECK(y == x.arg());
        }
    }

    TEST_CASE("non-principal members are copied") {
        auto sig = Signature::kripke();
        testsupport::FormulaGen gen(sig, 3);
        for (int t = 0; t < 100; ++t) {
            Sequent g{make_clean(gen(4)), Formula::var("z")};
            ClosureIndex cl(g);
            for (const auto& bp : enumerate_blueprints(cl, cl.root(), sig)) {
                if (bp.kind == BlueprintKind::Modal || bp.kind == BlueprintKind::Axiom) continue;
                auto cs = conclusions(cl, cl.root(), bp);
                for (std::size_t i = 0; i < cs.size(); ++i)
                    for (auto [x, y] : trace_relation(cl, cl.root(), bp, i))
                        if (x != bp.principal) CHECK(x == y);
            }
        }
    }

    TEST_CASE("automaton shape") {
        auto sig = Signature::kripke();
        ClosureIndex cl(Sequent{parse("mu X. (p | dia X)", sig)});
        auto npw = TraceNpw::build(cl);
        CHECK(npw.priority.size() == cl.size() + 1);
        CHECK(npw.priority[npw.initial()] == 0);
        for (FormulaId i = 0; i < cl.size(); ++i) CHECK(npw.priority[i] == cl[i].priority + 1);
    }

    TEST_CASE("dropped formulas start no trace") {
        auto sig = Signature::kripke();
        Formula A = Formula::var("a");
        Formula B = parse("dia X", sig);
        Formula muB = Formula::mu("X", B);
        Formula C = Formula::var("c");
        Sequent s0{Formula::disj(A, muB), C};
        Sequent s1{muB, C};
        TraceTile t0{s0, Blueprint{BlueprintKind::Or, Formula::disj(A, muB), {}, nullptr, {}}, 1};
        TraceTile t1{s1, Blueprint{BlueprintKind::Fix, muB, {}, nullptr, {}}, 0};
        auto r0 = trace_relation(t0);
        for (auto& [x, y] : r0) CHECK(y != A);
        auto r1 = trace_relation(t1);
        CHECK(std::find(r1.begin(), r1.end(), std::make_pair(C, C)) != r1.end());
        CHECK(std::find(r1.begin(), r1.end(), std::make_pair(muB, unfold(muB))) != r1.end());
    }

    TEST_CASE("lasso oracle examples") {
        auto sig = Signature::kripke();
        Formula nud = parse("nu X. dia X", sig);
        Formula mud = parse("mu X. dia X", sig);
        for (auto [f, bad] : {std::pair{nud, false}, std::pair{mud, true}}) {
            Sequent s{f};
            Sequent u{unfold(f)};
            Blueprint fix{BlueprintKind::Fix, f, {}, nullptr, {}};
            Blueprint modal;
            for (auto& bp : enumerate_blueprints(u, sig))
                if (bp.kind == BlueprintKind::Modal) modal = bp;
            REQUIRE(modal.rule);
            std::vector<TraceTile> cyc{{s, fix, 0}, {u, modal, 0}};
            CHECK(lasso_has_bad_trace({}, cyc, ParityMap::build(s)) == bad);

            ClosureIndex cl(s);
            std::vector<IdTile> ic;
            for (auto& t : cyc) {
                IdSet v;
                for (auto& g : t.sequent) v.push_back(cl.id(g));
                std::sort(v.begin(), v.end());
                ic.push_back({v, *to_id_blueprint(cl, t.blueprint), t.conclusion});
            }
            CHECK(lasso_has_bad_trace(cl, {}, ic) == bad);
            TraceAutomaton dta(cl);
            CHECK(testsupport::dta_accepts(dta, cl, {{}, ic}) == !bad);
        }
    }

    TEST_CASE("determinised automaton agrees with the lasso oracle") {
        for (auto sig : {Signature::kripke(), Signature::graded(), Signature::probabilistic(), Signature::coalition(2),
                         Signature::monotone()}) {
            testsupport::FormulaGen gen(sig, 100 + static_cast<int>(sig.logic));
            std::mt19937_64 rng(200 + static_cast<int>(sig.logic));
            int tested = 0, bad = 0, attempts = 0;
            while (tested < 1000 && attempts < 200000) {
                ++attempts;
                Formula a = make_clean(gen(6));
                Sequent g{a};
                if (check_clean_guarded(g)) continue;
                ClosureIndex cl(g);
                if (cl.size() > 14) continue;
                TraceAutomaton dta(cl);
                for (int k = 0; k < 10 && tested < 1000; ++k) {
                    auto l = testsupport::random_lasso(cl, sig, rng);
                    if (!l) continue;
                    bool oracle = lasso_has_bad_trace(cl, l->stem, l->cycle);
                    CHECK(testsupport::dta_accepts(dta, cl, *l) == !oracle);
                    bad += oracle;
                    ++tested;
                }
            }
            CHECK(tested == 1000);
            CHECK(bad > 50);
            CHECK(bad < 950);
        }
    }
}
