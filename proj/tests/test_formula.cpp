#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

#include "colmu/closure.hpp"
#include "colmu/parser.hpp"

using namespace colmu;

namespace {

Formula K(const std::string& s) { return parse(s, Signature::kripke()); }

using testsupport::ref_size;

void subsets_size_check(const std::vector<Formula>& cl, std::int64_t bound) {
    // the largest subset is the whole closure
    std::int64_t total = 0;
    for (const auto& f : cl) total += ref_size(f);
    CHECK(total <= bound);
}

}  // namespace

TEST_SUITE("formula") {
    TEST_CASE("parser basics") {
        Formula f = K("p | ~p");
        CHECK(f.kind() == Kind::Or);
        CHECK(f.left().is_var());
        CHECK(f.left() != f.right());
        CHECK(negate(f.left()) == f.right());

        Formula g = parse("<1/2> p", Signature::probabilistic());
        REQUIRE(g.is_modal());
        CHECK(g.modality() == Modality::at_least(Rational(1, 2)));
        CHECK(g.arg() == Formula::var("p"));

        CHECK_THROWS_AS(parse("<3/2> p", Signature::probabilistic()), ParseError);
        CHECK_THROWS_AS(parse("box p", Signature::graded()), ParseError);
        CHECK_THROWS_AS(parse("[{4}] p", Signature::coalition(3)), ParseError);
        CHECK_THROWS_AS(K("p &"), ParseError);
        CHECK_THROWS_AS(K("(p"), ParseError);
    }

    TEST_CASE("general negation is pushed to atoms") {
        Formula f = K("!(mu X. q | dia X)");
        Formula want = Formula::nu("X", Formula::conj(Formula::var("q", true), Formula::modal(Modality::box(Logic::Kripke), Formula::var("X"))));
        CHECK(f == want);
        CHECK(negate(K("mu p. (q | dia p)")) == K("nu p. (~q & box p)"));
        CHECK(negate(Formula::var("p")) == Formula::var("p", true));
        CHECK(negate(Formula::var("p", true)) == Formula::var("p"));
    }

    TEST_CASE("binder scope under prefix operators") {
        auto sig = Signature::coalition(2);
        Formula f = parse("[{1}] nu X.(p & <{1,2}> X) & q", sig);
        CHECK(f.kind() == Kind::And);
        Formula g = parse("mu X. p | dia X", Signature::kripke());
        CHECK(g.kind() == Kind::Mu);
    }

    TEST_CASE("negation is an involution") {
        for (auto sig : {Signature::kripke(), Signature::graded(), Signature::probabilistic(), Signature::coalition(3),
                         Signature::monotone()}) {
            testsupport::FormulaGen gen(sig, 11);
            for (int i = 0; i < 300; ++i) {
                Formula a = gen(5);
                CHECK(negate(negate(a)) == a);
            }
        }
    }

    TEST_CASE("printing round-trips through the parser") {
        for (auto sig : {Signature::kripke(), Signature::graded(), Signature::probabilistic(), Signature::coalition(3),
                         Signature::monotone()}) {
            testsupport::FormulaGen gen(sig, 5);
            for (int i = 0; i < 200; ++i) {
                Formula a = gen(5);
                CHECK(parse(to_string(a), sig) == a);
            }
        }
    }

    TEST_CASE("substitution and unfolding") {
        Formula x = Formula::var("X");
        Formula dx = Formula::modal(Modality::dia(Logic::Kripke), x);
        Formula m = Formula::mu("X", dx);
        CHECK(substitute(dx, "X", m) == Formula::modal(Modality::dia(Logic::Kripke), m));
        CHECK(substitute(Formula::var("p"), "X", m) == Formula::var("p"));
        Formula f = K("mu X. (p | dia X)");
        CHECK(unfold(f) == Formula::disj(Formula::var("p"), Formula::modal(Modality::dia(Logic::Kripke), f)));
    }

    TEST_CASE("clean and guarded") {
        CHECK(check_clean_guarded(Sequent{K("mu X. X")}).has_value());
        CHECK(!check_clean_guarded(Sequent{K("mu X. dia X")}).has_value());
        CHECK(check_clean_guarded(Sequent{K("(mu X. dia X) & (nu X. box X)")}).has_value());
        Sequent repaired = make_clean(Sequent{K("(mu X. dia X) & (nu X. box X)")});
        CHECK(!check_clean_guarded(repaired).has_value());
    }

    TEST_CASE("size measure") {
        CHECK(size(Formula::var("p")) == 1);
        CHECK(size(parse("<5> p", Signature::graded())) == 5);
        CHECK(size(parse("<0> p", Signature::graded())) == 2);
        CHECK(size(parse("<1/2> p", Signature::probabilistic())) == 2 + 0 + 1 + 1);
        CHECK(size(K("box p")) == 2);
        CHECK(size(parse("[{1}] p", Signature::coalition(2))) == 3);
        for (auto sig : {Signature::graded(), Signature::probabilistic(), Signature::coalition(2)}) {
            testsupport::FormulaGen gen(sig, 3);
            for (int i = 0; i < 200; ++i) {
                Formula a = gen(5);
                CHECK(size(a) == ref_size(a));
            }
        }
    }

    TEST_CASE("closure") {
        CHECK(closure(Sequent{K("p")}) == std::vector<Formula>{K("p")});
        auto cl = closure(Sequent{K("dia p & q")});
        CHECK(cl.size() == 4);
        for (auto s : {"dia p & q", "dia p", "q", "p"})
            CHECK(std::find(cl.begin(), cl.end(), K(s)) != cl.end());
    }

    TEST_CASE("closure lemmas on random formulas") {
        for (auto sig : {Signature::kripke(), Signature::graded(), Signature::probabilistic(), Signature::coalition(2),
                         Signature::monotone()}) {
            testsupport::FormulaGen gen(sig, 99);
            for (int i = 0; i < 200; ++i) {
                Formula a = make_clean(gen(6));
                auto cl = closure(Sequent{a});
                CHECK(static_cast<std::int64_t>(cl.size()) <= size(a));
                std::int64_t s = size(a);
                subsets_size_check(cl, s * s * s);
                for (const auto& f : cl)
                    if (f.is_fixpoint()) CHECK(std::find(cl.begin(), cl.end(), unfold(f)) != cl.end());
            }
        }
    }

    TEST_CASE("parity map") {
        auto sig = Signature::coalition(2);
        Formula a = parse("[{1}] nu X.(p & <{1,2}> X) & [{2}] mu Y.(~p | [{2}] Y)", sig);
        auto pm = ParityMap::build(Sequent{a});
        CHECK(pm.of_binder("X") == 2);
        CHECK(pm.of_binder("Y") == 1);
        CHECK(pm(a) == 0);
        CHECK(!pm.validate(Sequent{a}).has_value());

        auto none = ParityMap::build(Sequent{K("box p & dia q")});
        CHECK(none.max_priority() == 0);

        Formula nested = K("mu X. nu Y. (dia X | box Y)");
        auto pn = ParityMap::build(Sequent{nested});
        CHECK(pn.of_binder("X") % 2 == 1);
        CHECK(pn.of_binder("Y") % 2 == 0);
        CHECK(pn.of_binder("X") > pn.of_binder("Y"));
        CHECK(!pn.validate(Sequent{nested}).has_value());

        for (auto s : {Signature::kripke(), Signature::graded()}) {
            testsupport::FormulaGen gen(s, 7);
            for (int i = 0; i < 200; ++i) {
                Sequent g{make_clean(gen(6))};
                auto p = ParityMap::build(g);
                CHECK(!p.validate(g).has_value());
                CHECK(p.max_priority() <= static_cast<int>(closure(g).size()));
                for (const auto& f : closure(g)) {
                    int v = p(f);
                    if (f.kind() == Kind::Mu) CHECK(v % 2 == 1);
                    else if (f.kind() == Kind::Nu) CHECK((v % 2 == 0 && v > 0));
                    else CHECK(v == 0);
                }
            }
        }
    }

    TEST_CASE("closure index is canonical") {
        Sequent g{K("mu X. (p | dia X)"), K("box ~p")};
        ClosureIndex ci(g);
        for (FormulaId i = 0; i + 1 < ci.size(); ++i) CHECK(ci.formula(i) < ci.formula(i + 1));
        for (FormulaId i = 0; i < ci.size(); ++i) {
            if (ci[i].negation != kNoFormula) CHECK(ci.formula(ci[i].negation) == negate(ci.formula(i)));
            CHECK(ci.id(ci.formula(i)) == i);
        }
        CHECK(ci.root().size() == 2);
    }
}
