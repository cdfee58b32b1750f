#include <doctest.h>

#include <bit>

#include "cdl/agm.hpp"
#include "cdl/error.hpp"
#include "support.hpp"

using namespace cdl;
using namespace cdl::agm;
using cdl::testing::Rng;

namespace {

const std::vector<std::string> kPQ{"p", "q"};

Formula f(const char* s) { return parse_formula(s, Language::cdl); }

// Valuation v makes letter i true iff bit i is set.
WorldSet vals(std::initializer_list<std::uint64_t> vs) {
  WorldSet s;
  for (auto v : vs) s.insert(v);
  return s;
}

BeliefState cn(const char* s, const std::vector<std::string>& letters = kPQ) {
  return consequence_close({f(s)}, letters);
}

// Drastic revision computed directly from the case split.
WorldSet drastic(WorldSet t, WorldSet psi) {
  if (psi.empty()) return WorldSet();
  if (t.intersects(psi)) return t & psi;
  return psi;
}

}  // namespace

TEST_CASE("consequence and expansion") {
  CHECK(consequence_close({}, {"p"}).models == vals({0, 1}));
  CHECK(cn("p & q").models == vals({3}));
  CHECK_FALSE(consequence_close({f("p"), f("~p")}, kPQ).consistent());
  CHECK(expand(cn("p"), f("q")) == cn("p & q"));
  CHECK_FALSE(expand(cn("p"), f("~p")).consistent());
  CHECK(expand(consequence_close({}, kPQ), f("true")) == consequence_close({}, kPQ));
  CHECK(cn("p").believes(f("p | q")));
  CHECK_FALSE(cn("p").believes(f("q")));
  CHECK_THROWS_AS(consequence_close({f("B[p] q")}, kPQ), LanguageError);
  CHECK_THROWS_AS(consequence_close({f("r")}, kPQ), LanguageError);
}

TEST_CASE("property: Cn operator laws") {
  Rng rng(41);
  const std::vector<std::string> letters{"p", "q", "r"};
  for (int i = 0; i < 200; ++i) {
    std::vector<Formula> s{testing::random_propositional(rng, letters, 3)};
    std::vector<Formula> bigger = s;
    bigger.push_back(testing::random_propositional(rng, letters, 3));
    BeliefState c = consequence_close(s, letters);
    // inclusion
    for (const Formula& g : s) CHECK(c.believes(g));
    // monotony
    CHECK(consequence_close(bigger, letters).models.subset_of(c.models));
    // iteration: closing a finite axiomatization of Cn(S) changes nothing
    CHECK(consequence_close({canonical_formula(c.models, letters)}, letters) == c);
    // supraclassicality
    Formula taut = Formula::implies(s[0], s[0]);
    CHECK(c.believes(taut));
    // deductive consistency
    CHECK(c.consistent() == !c.believes(Formula::bottom()));
  }
}

TEST_CASE("grove systems") {
  GroveSystem one = grove_system_for(cn("p", {"p"}), Strategy::two_layer);
  CHECK(one.ranks == std::vector<int>{1, 0});
  GroveSystem ham = grove_system_for(cn("p & q"), Strategy::hamming);
  CHECK(ham.ranks == std::vector<int>{2, 1, 1, 0});
  CHECK_THROWS_AS(grove_system_for(cn("p & ~p"), Strategy::two_layer), ModelError);
  CHECK(parse_strategy("hamming") == Strategy::hamming);
  CHECK_THROWS_AS(parse_strategy("nope"), Error);
}

TEST_CASE("property: grove systems are well-ordered and return their seed") {
  const std::vector<std::string> letters{"p", "q", "r"};
  for (std::uint64_t bits = 1; bits < 256; ++bits) {
    BeliefState t{letters, WorldSet(bits)};
    for (Strategy s : {Strategy::two_layer, Strategy::hamming}) {
      GroveSystem g = grove_system_for(t, s);
      CHECK(classify_model(g.model).well_ordered);
      CHECK(belief_set_of(g) == t);
      if (s == Strategy::hamming) {
        for (std::uint64_t v = 0; v < 8; ++v) {
          int best = 99;
          for (World m : t.models) best = std::min(best, std::popcount(v ^ m));
          CHECK(g.ranks[v] == best);
        }
      }
    }
  }
}

TEST_CASE("revision examples") {
  for (Strategy s : {Strategy::two_layer, Strategy::hamming}) {
    Revision rev = grove_revision(s);
    CHECK(rev(cn("p"), f("q")) == cn("p & q"));
    CHECK_FALSE(rev(cn("p"), f("false")).consistent());
  }
  CHECK(grove_revision(Strategy::two_layer)(cn("p & q"), f("~p")) == cn("~p"));
  CHECK(grove_revision(Strategy::hamming)(cn("p & q"), f("~p")) == cn("~p & q"));
  CHECK(revise_via_model(grove_system_for(cn("p"), Strategy::two_layer), f("~p")) == cn("~p"));
  // an inconsistent state is revised through the system of Cn(empty)
  CHECK(grove_revision(Strategy::two_layer)(cn("p & ~p"), f("q")) == cn("q"));
}

TEST_CASE("property: two-layer revision is drastic revision") {
  Revision rev = grove_revision(Strategy::two_layer);
  for (std::uint64_t t = 1; t < 16; ++t) {
    for (std::uint64_t psi = 0; psi < 16; ++psi) {
      BeliefState state{kPQ, WorldSet(t)};
      CHECK(rev(state, canonical_formula(WorldSet(psi), kPQ)).models == drastic(WorldSet(t), WorldSet(psi)));
    }
  }
}

TEST_CASE("canonical formulas") {
  CHECK(canonical_dnf(WorldSet(), kPQ) == "false");
  CHECK(canonical_dnf(vals({0, 1, 2, 3}), kPQ) == "true");
  CHECK(canonical_dnf(vals({1, 3}), kPQ) == "p");
  CHECK(canonical_dnf(vals({0, 2}), kPQ) == "~p");
  for (std::uint64_t bits = 0; bits < 256; ++bits) {
    const std::vector<std::string> letters{"p", "q", "r"};
    CHECK(models_of(canonical_formula(WorldSet(bits), letters), letters) == WorldSet(bits));
    CHECK(models_of(minterm_formula(WorldSet(bits), letters), letters) == WorldSet(bits));
  }
}

TEST_CASE("postulate checking") {
  for (Strategy s : {Strategy::two_layer, Strategy::hamming}) {
    auto report = check_postulates(grove_revision(s), kPQ);
    REQUIRE(report.size() == 8);
    for (const PostulateResult& r : report) {
      CAPTURE(r.name);
      CHECK(r.pass);
      CHECK(r.witness.empty());
    }
  }
  auto broken = check_postulates(expansion_revision(), kPQ);
  bool consistency_failed = false;
  for (const PostulateResult& r : broken) {
    if (r.name != "Consistency") continue;
    consistency_failed = !r.pass;
    CHECK(r.witness.find("T = Cn(") != std::string::npos);
  }
  CHECK(consistency_failed);
}
