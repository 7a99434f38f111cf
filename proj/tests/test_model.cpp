#include "doctest.h"
#include "support.hpp"

#include "colmu/model_extraction.hpp"
#include "colmu/parser.hpp"

#include <cmath>

using namespace colmu;

TEST_SUITE("model_extraction") {
    TEST_CASE("propositional strategy") {
        auto k = Signature::kripke();
        Formula ab = parse("a | b", k);
        auto bp = propositional_strategy(Sequent{Formula::var("p"), ab});
        CHECK(bp.kind == BlueprintKind::Or);
        CHECK(bp.principal == ab);
        Formula m = parse("mu X. dia X", k), qr = parse("q & r", k);
        auto b2 = propositional_strategy(Sequent{m, qr});
        CHECK(b2.principal == std::min(m, qr));
        CHECK(b2.kind == (m < qr ? BlueprintKind::Fix : BlueprintKind::And));
        CHECK(propositional_strategy(Sequent{qr, m}).principal == b2.principal);
        CHECK_THROWS_AS(propositional_strategy(Sequent{Formula::var("p"), parse("box p", k)}), std::logic_error);
    }

    TEST_CASE("sigma") {
        auto k = Signature::kripke();
        auto r = decide_sat(parse("p | q", k), k);
        REQUIRE(r.satisfiable);
        ModelExtractor ex(*r.game, r.solution);
        Position s = ex.sigma(r.game->root());
        auto& g = *r.game;
        // the strategy's answer to the (or) rule
        Position e = g.arena().moves[g.root()][0];
        Position chosen = r.solution.strategy[e];
        CHECK(s == chosen);
        CHECK(ex.sigma(s) == s);
        CHECK(g.sequent(g.info(s).sequent).size() == 1);
        CHECK(g.info(s).state == g.automaton().step(g.info(g.root()).state,
                                                     trace_relation(g.closure(), g.sequent(g.info(g.root()).sequent),
                                                                    g.blueprint(e), chosen == g.arena().moves[e][0] ? 0 : 1)));
        ModelExtractor again(*r.game, r.solution);
        CHECK(again.sigma(r.game->root()) == s);
    }

    TEST_CASE("one-state models for a variable") {
        for (auto sig : {Signature::kripke(), Signature::graded(), Signature::probabilistic(), Signature::coalition(2),
                         Signature::monotone()}) {
            auto r = decide_sat(Formula::var("p"), sig);
            REQUIRE(r.satisfiable);
            auto m = extract_model(*r.game, r.solution);
            REQUIRE(m.size() == 1);
            CHECK(m.valuation.at("p")[0]);
            CHECK(m.root == State(0));
            switch (sig.logic) {
                case Logic::Kripke: CHECK(m.successors[0].empty()); break;
                case Logic::Graded: CHECK(m.weights[0].empty()); break;
                case Logic::Probabilistic: CHECK(m.dist[0] == std::vector<std::pair<State, Rational>>{{0, Rational(1)}}); break;
                case Logic::Monotone: CHECK(m.neighborhoods[0].empty()); break;
                case Logic::Coalition: CHECK(m.games[0].profiles() == 1); break;
            }
        }
    }

    TEST_CASE("model examples") {
        auto k = Signature::kripke();
        auto r = decide_sat(parse("nu X. (p & dia X)", k), k);
        REQUIRE(r.satisfiable);
        auto m = extract_model(*r.game, r.solution);
        CHECK(satisfies(m, 0, r.game->closure().root_sequent()[0]));
        auto back = model_from_json(model_to_json(m), k);
        CHECK(back.root == State(0));
        CHECK(model_to_json(back) == model_to_json(m));
        CHECK(model_to_json(m).find("\"root\": \"s0\"") != std::string::npos);
    }

    TEST_CASE("round trip on random satisfiable formulas") {
        for (auto sig : {Signature::kripke(), Signature::monotone(), Signature::coalition(2), Signature::coalition(3),
                         Signature::graded(), Signature::probabilistic()}) {
            testsupport::FormulaGen gen(sig, 31 + static_cast<int>(sig.logic) + sig.agents);
            int done = 0;
            while (done < 120) {
                Formula a = make_clean(gen(6));
                if (ClosureIndex(Sequent{a}).size() > 14) continue;
                auto r = decide_sat(a, sig);
                if (!r.satisfiable) continue;
                ++done;
                ModelExtractor ex(*r.game, r.solution);
                CoalgebraModel m;
                try {
                    m = ex.model();
                } catch (const std::exception& e) {
                    FAIL_CHECK(to_string(a) << ": " << e.what());
                    continue;
                }
                CHECK_FALSE(ex.check_coherent(m));
                CHECK_MESSAGE(satisfies(m, 0, r.game->closure().root_sequent()[0]), sig.name() << " " << to_string(a));
                double bound = std::pow(2.0, double(r.game->closure().size())) * double(r.game->automaton().state_count());
                CHECK(double(m.size()) <= bound);
                CHECK(ex.max_sigma_steps() <= r.game->closure().size() * r.game->sequent_count());
                // no state is both an A- and a negated-A successor of the same state
                const ClosureIndex& cl = r.game->closure();
                for (std::size_t y = 0; y < m.size(); ++y)
                    for (FormulaId f = 0; f < cl.size(); ++f) {
                        FormulaId g = cl[f].negation;
                        if (g == kNoFormula || g < f) continue;
                        CHECK_FALSE(ex.suc(y, f).intersects(ex.suc(y, g)));
                    }
            }
        }
    }

    TEST_CASE("incoherent structures are detected") {
        auto k = Signature::kripke();
        auto r = decide_sat(parse("dia p & box q", k), k);
        REQUIRE(r.satisfiable);
        ModelExtractor ex(*r.game, r.solution);
        auto m = ex.model();
        CHECK_FALSE(ex.check_coherent(m));
        m.successors[0].clear();
        CHECK(ex.check_coherent(m));
    }
}
