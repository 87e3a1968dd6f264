#include <doctest.h>

#include <cycdec/admissibility.hh>
#include <cycdec/oracle.hh>

using namespace cycdec;

TEST_CASE("solve_exact examples")
{
    auto r = solve_exact(1, 5, LengthList{ 5, 5 }, SearchBudget::unlimited());
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(verify(*r.certificate).accepted);
    CHECK(r.certificate->claimed == LengthList{ 5, 5 });

    auto none = solve_exact(2, 4, LengthList{ 4, 2, 2, 2, 2 }, SearchBudget::unlimited());
    CHECK(none.status == SearchStatus::Infeasible);
    CHECK(! none.certificate);

    auto empty = solve_exact(1, 1, LengthList{}, SearchBudget::unlimited());
    REQUIRE(empty.status == SearchStatus::Found);
    CHECK(empty.certificate->packing.cycles.empty());
    CHECK(verify(*empty.certificate).accepted);
}

TEST_CASE("solve_exact with a matching")
{
    auto r = solve_exact(1, 6, LengthList{ 6, 6 }, SearchBudget::unlimited());
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.certificate->packing.matching.has_value());
    CHECK(verify(*r.certificate).accepted);
}

TEST_CASE("budget exhaustion is distinct from infeasibility")
{
    auto r = solve_exact(2, 5, LengthList::repeated(2, 10), SearchBudget::nodes(1));
    CHECK(r.status == SearchStatus::BudgetExhausted);
    CHECK(! r.certificate);
}

TEST_CASE("determinism under a fixed seed")
{
    SearchBudget b;
    b.seed = 11;
    auto a = solve_exact(2, 6, LengthList{ 6, 6, 6, 4, 4, 4 }, b);
    auto c = solve_exact(2, 6, LengthList{ 6, 6, 6, 4, 4, 4 }, b);
    REQUIRE(a.certificate);
    REQUIRE(c.certificate);
    CHECK(a.certificate->packing.cycles == c.certificate->packing.cycles);
}

TEST_CASE("union decomposition examples")
{
    Multigraph g(4);
    Cycle{ 0, 1, 2, 3 }.add_to(g);
    Cycle{ 0, 2 }.add_to(g);
    auto r = decompose_union_into_lengths(g, LengthList{ 3, 3 }, SearchBudget::unlimited());
    REQUIRE(r.status == SearchStatus::Found);
    REQUIRE(r.cycles.size() == 2);
    std::vector<Cycle> got{ r.cycles[0].canonical(), r.cycles[1].canonical() };
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<Cycle>{ Cycle{ 0, 1, 2 }, Cycle{ 0, 2, 3 } });

    auto c5 = Cycle{ 0, 1, 2, 3, 4 }.as_graph(5);
    auto r5 = decompose_union_into_lengths(c5, LengthList{ 5 }, SearchBudget::unlimited());
    REQUIRE(r5.status == SearchStatus::Found);
    CHECK(same_cycle(r5.cycles[0], Cycle{ 0, 1, 2, 3, 4 }));

    Multigraph split(5);
    Cycle{ 0, 1, 2 }.add_to(split);
    Cycle{ 3, 4 }.add_to(split);
    CHECK(decompose_union_into_lengths(split, LengthList{ 5 }, SearchBudget::unlimited()).status == SearchStatus::Infeasible);
}

TEST_CASE("enumeration visits each decomposition once")
{
    // 2K_3: (3,3) via the one triangle twice, or three 2-cycles.
    int count = 0;
    auto status = for_each_decomposition(complete_multigraph(2, 3), std::nullopt, SearchBudget::unlimited(),
            [&] (std::span<const Cycle>) { ++count; return true; });
    CHECK(status == SearchStatus::Infeasible);
    CHECK(count == 2);

    // K_4 has exactly three 4-cycles and each leaves a perfect matching, so K_4 itself has no decomposition.
    count = 0;
    for_each_decomposition(complete_multigraph(1, 4), std::nullopt, SearchBudget::unlimited(),
            [&] (std::span<const Cycle>) { ++count; return true; });
    CHECK(count == 0);

    // K_5: 12 Hamilton cycles, each complement is a Hamilton cycle, so 6 (5,5) decompositions;
    // (3,3,4) splits are counted independently: choose the 4-cycle (15 ways), its complement is a bowtie.
    int fives = 0, mixed = 0;
    for_each_decomposition(complete_multigraph(1, 5), std::nullopt, SearchBudget::unlimited(),
            [&] (std::span<const Cycle> cs) {
                if (cs.size() == 2)
                    ++fives;
                else
                    ++mixed;
                return true;
            });
    CHECK(fives == 6);
    CHECK(mixed == 15);
}

TEST_CASE("circulant Hamilton decompositions")
{
    HamiltonCache cache;
    auto k7 = hamilton_decompose_circulant(7, { 1, 2, 3 }, SearchBudget::unlimited(), &cache);
    REQUIRE(k7);
    CHECK(k7->cycles.size() == 3);
    CHECK(! k7->matching);

    auto c8 = hamilton_decompose_circulant(8, { 3, 4 }, SearchBudget::unlimited(), &cache);
    REQUIRE(c8);
    CHECK(c8->cycles.size() == 1);
    CHECK(c8->matching);

    auto c9 = hamilton_decompose_circulant(9, { 3, 4 }, SearchBudget::unlimited(), &cache);
    REQUIRE(c9);
    CHECK(c9->cycles.size() == 2);

    auto again = cache.lookup(9, { 3, 4 });
    REQUIRE(again);
    CHECK(again->cycles == c9->cycles);
}
