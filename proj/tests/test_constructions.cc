#include <doctest.h>

#include <cycdec/admissibility.hh>
#include <cycdec/constructions.hh>
#include <cycdec/oracle.hh>

#include <random>
#include <vector>

using std::vector;

using namespace cycdec;

namespace
{
    auto union_of(const vector<Cycle> & cycles, int n) -> Multigraph
    {
        Multigraph g(n);
        for (const auto & c : cycles) {
            REQUIRE(c.valid(n));
            c.add_to(g);
        }
        return g;
    }

    auto lengths_of(const vector<Cycle> & cycles) -> LengthList
    {
        vector<int> v;
        for (const auto & c : cycles)
            v.push_back(c.length());
        return LengthList(std::move(v));
    }

    auto circ(int n, vector<int> distances) -> Multigraph
    {
        return circulant(n, distances);
    }

    auto twice(Multigraph g) -> Multigraph
    {
        g += Multigraph(g);
        return g;
    }

    auto k_n_certificate(int n, const LengthList & m) -> Certificate
    {
        auto r = solve_exact(1, n, m, SearchBudget::nodes(5'000'000));
        REQUIRE(r.status == SearchStatus::Found);
        return *r.certificate;
    }

    const auto budget = SearchBudget::nodes(5'000'000);
}

TEST_CASE("path-style J tables")
{
    auto one = j_path_odd(1);
    REQUIRE(one.cycles.size() == 1);
    CHECK(same_cycle(one.cycles[0], Cycle{ 0, 2 }));
    CHECK(one.paths == vector<vector<Vertex>>{ { 0, 1 }, { 0, 1 } });
    CHECK_NOTHROW(check_j(one));

    auto five = j_path_odd(5);
    CHECK_NOTHROW(check_j(five));
    CHECK(five.lengths() == LengthList{ 6, 2, 2 });
    const Cycle & a = five.cycles[0];
    CHECK(a.length() == 6);
    CHECK(a.has_edge(0, 1));
    CHECK(a.has_edge(4, 5));

    auto two_odds = j_path_two_odds(1, 1);
    CHECK_NOTHROW(check_j(two_odds));
    CHECK(two_odds.lengths() == LengthList{ 3, 3, 2 });

    CHECK_THROWS(j_path_odd(4));
    CHECK_THROWS(j_path_two_odds(0, 2));

    for (int k = 1 ; k <= 9 ; k += 2)
        CHECK_NOTHROW(check_j(j_path_odd(k)));
    for (int k1 = 1 ; k1 <= 4 ; ++k1)
        for (int k2 = 1 ; k1 + k2 <= 5 ; ++k2)
            CHECK_NOTHROW(check_j(j_path_two_odds(k1, k2)));
}

TEST_CASE("prism J tables")
{
    for (int k = 2 ; k <= 5 ; ++k)
        CHECK_NOTHROW(check_j(j_prism_even_star(k)));
    for (int k = 1 ; k <= 5 ; ++k) {
        auto d = j_prism_even_plus(k);
        CHECK(d.plus);
        CHECK_NOTHROW(check_j(d));
    }
    for (int n : { 4, 8, 12 })
        CHECK_NOTHROW(check_j(j_prism_small_star(n)));
    CHECK(j_prism_small_star(8).lengths() == LengthList{ 3, 2, 3 });
    CHECK_NOTHROW(check_j(j_prism_two_odds_star(2, 1)));
    CHECK_NOTHROW(check_j(j_prism_two_odds_plus(1, 1)));
    CHECK_THROWS(j_prism_small_star(6));
    CHECK_THROWS(j_prism_even_star(1));
}

TEST_CASE("J concatenation")
{
    auto path = concatenate_j({ j_path_odd(1), j_path_odd(1) });
    CHECK(path.n == 2);
    CHECK(path.lengths() == LengthList{ 2, 2 });
    CHECK_NOTHROW(check_j(path));

    auto prism = concatenate_j({ j_prism_even_plus(1), j_prism_small_star(4) });
    CHECK(prism.n == 6);
    CHECK(prism.lengths() == LengthList{ 2, 2, 2 });
    CHECK(! prism.plus);
    CHECK_NOTHROW(check_j(prism));
    CHECK(prism.implicit_matching().size() == 3);

    CHECK_THROWS(concatenate_j({}));
    CHECK_THROWS(concatenate_j({ j_path_odd(1), j_prism_even_plus(1) }));
    CHECK_THROWS(concatenate_j({ j_prism_small_star(4), j_prism_even_plus(1) }));
}

TEST_CASE("closing a path-style J decomposition")
{
    auto closed = circ12_close(concatenate_j({ j_path_odd(1), j_path_odd(1), j_path_odd(1), j_path_odd(1), j_path_odd(1),
                    j_path_odd(1) }));
    CHECK(union_of(closed, 6) == twice(circ(6, { 1, 2 })));
    CHECK(lengths_of(closed) == LengthList{ 6, 6, 2, 2, 2, 2, 2, 2 });

    auto three = circ12_close(concatenate_j({ j_path_two_odds(1, 1), j_path_odd(1), j_path_odd(1) }));
    CHECK(union_of(three, 6) == twice(circ(6, { 1, 2 })));

    CHECK_THROWS_AS(circ12_close(j_path_odd(5)), ConstructionError);

    auto two = circ12_two_hams(6, LengthList{ 3, 3, 2, 2, 2 });
    CHECK(union_of(two, 6) == twice(circ(6, { 1, 2 })));
    CHECK(lengths_of(two) == LengthList{ 6, 6, 3, 3, 2, 2, 2 });
    CHECK_THROWS_AS(circ12_two_hams(5, LengthList{ 3, 3, 2, 2 }), ConstructionError);
}

TEST_CASE("single circulant examples")
{
    auto five = circ12_single(5, LengthList{ 5 });
    REQUIRE(five.size() == 2);
    CHECK(five[0] == Cycle{ 0, 2, 4, 3, 1 });
    CHECK(same_cycle(five[1], Cycle{ 0, 4, 1, 2, 3 }));

    auto six = circ12_single(6, LengthList{ 3, 3 });
    REQUIRE(six.size() == 3);
    CHECK(six[0] == Cycle{ 0, 2, 1 });
    CHECK(six[1] == Cycle{ 3, 5, 4 });
    CHECK(six[2].length() == 6);
    CHECK(union_of(six, 6) == circ(6, { 1, 2 }));

    auto seven = circ12_single(7, LengthList{ 4, 3 });
    CHECK(lengths_of(seven) == LengthList{ 7, 4, 3 });
    CHECK(union_of(seven, 7) == circ(7, { 1, 2 }));

    CHECK_THROWS_AS(circ12_single(6, LengthList{ 4, 2 }), ConstructionError);
    CHECK_THROWS_AS(circ12_single(6, LengthList{ 3, 4 }), ConstructionError);
}

TEST_CASE("single circulant over random lists")
{
    std::mt19937 rng(3);
    for (int n = 5 ; n <= 20 ; ++n)
        for (int trial = 0 ; trial < 10 ; ++trial) {
            vector<int> parts;
            int left = n;
            while (left > 0) {
                int m = left <= 5 ? left : 3 + static_cast<int>(rng() % (left - 5));
                parts.push_back(m);
                left -= m;
            }
            LengthList m(parts);
            auto cs = circ12_single(n, m);
            CHECK(union_of(cs, n) == circ(n, { 1, 2 }));
            CHECK(lengths_of(cs) == m + LengthList{ n });
        }
}

TEST_CASE("three Hamilton cycles in 2<{1,2}>_n")
{
    auto a = circ12_three_hams(7, LengthList{ 3, 4 });
    CHECK(union_of(a, 7) == twice(circ(7, { 1, 2 })));
    CHECK(lengths_of(a) == LengthList{ 7, 7, 7, 4, 3 });

    auto b = circ12_three_hams(6, LengthList{ 2, 2, 2 });
    CHECK(union_of(b, 6) == twice(circ(6, { 1, 2 })));
    CHECK(lengths_of(b) == LengthList{ 6, 6, 6, 2, 2, 2 });

    auto c = circ12_three_hams(7, LengthList{ 2, 2, 3 });
    CHECK(union_of(c, 7) == twice(circ(7, { 1, 2 })));
    CHECK(lengths_of(c) == LengthList{ 7, 7, 7, 3, 2, 2 });

    CHECK_THROWS_AS(circ12_three_hams(7, LengthList{ 3, 3 }), ConstructionError);
}

TEST_CASE("2-cycles and doubled Hamilton cycles")
{
    auto a = twos_and_hams(7, 0, 1, budget);
    CHECK(union_of(a, 7) == twice(circ(7, { 3 })));
    CHECK(lengths_of(a) == LengthList{ 7, 7 });
    CHECK(same_cycle(a[0], a[1]));

    auto b = twos_and_hams(7, 7, 0, budget);
    CHECK(union_of(b, 7) == twice(circ(7, { 3 })));
    CHECK(lengths_of(b) == LengthList::repeated(2, 7));

    auto c = twos_and_hams(8, 4, 1, budget);
    CHECK(union_of(c, 8) == twice(circ(8, { 3, 4 })));
    CHECK(lengths_of(c) == LengthList{ 8, 8, 2, 2, 2, 2 });

    CHECK_THROWS(twos_and_hams(7, 1, 1, budget));
}

TEST_CASE("Hamilton cycle and matching")
{
    for (auto [n, m] : vector<std::pair<int, LengthList>>{
            { 6, LengthList{ 3, 3 } }, { 8, LengthList{ 8 } }, { 10, LengthList{ 5, 3, 2 } }, { 12, LengthList{ 4, 4, 2, 2 } } }) {
        CAPTURE(n);
        auto r = ham_and_matching(n, m, budget);
        CHECK(r.matching.size() == static_cast<std::size_t>(n / 2));
        Multigraph expected = circ(n, { n / 2 - 1, n / 2 });
        expected += matching_graph(r.matching, n);
        CHECK(r.system.graph == expected);
        CHECK(union_of(r.system.cycles, n) == expected);
        CHECK(lengths_of(r.system.cycles) == m + LengthList{ n });
    }
    CHECK_THROWS(ham_and_matching(7, LengthList{ 7 }, budget));
    CHECK_THROWS(ham_and_matching(8, LengthList{ 5 }, budget));
}

TEST_CASE("one graph, two decompositions")
{
    for (auto [n, m] : vector<std::pair<int, LengthList>>{
            { 7, LengthList{ 4 } }, { 7, LengthList{ 2, 2 } }, { 6, LengthList{ 3, 3 } }, { 9, LengthList{ 2, 3, 4 } } }) {
        CAPTURE(n);
        auto r = sum_list_to_many(n, m);
        CHECK(union_of(r.many, n) == r.graph);
        CHECK(union_of(r.one, n) == r.graph);
        CHECK(lengths_of(r.many) == m + LengthList{ n });
        CHECK(lengths_of(r.one) == LengthList{ static_cast<int>(m.sum()), n });
        CHECK(r.one[0].length() == m.sum());
        CHECK(r.graph.max_mult() <= 2);
    }
    CHECK_THROWS(sum_list_to_many(5, LengthList{ 3, 3 }));
}

TEST_CASE("three lists for odd n")
{
    auto a = three_lists(5, k_n_certificate(5, LengthList{ 5, 5 }), k_n_certificate(5, LengthList{ 5, 5 }), LengthList{ 5 });
    CHECK(verify(a).accepted);
    CHECK(a.claimed == LengthList{ 5, 5, 5, 5 });

    auto b = three_lists(7, k_n_certificate(7, LengthList{ 7, 7, 7 }), k_n_certificate(7, LengthList{ 7, 7, 4, 3 }),
            LengthList{ 7 });
    CHECK(verify(b).accepted);
    CHECK(b.claimed == LengthList{ 7, 7, 7, 7, 7, 4, 3 });

    auto c = three_lists(7, k_n_certificate(7, LengthList{ 7, 7, 7 }), k_n_certificate(7, LengthList{ 7, 7, 7 }),
            LengthList{ 4, 3 });
    CHECK(verify(c).accepted);
    CHECK(c.claimed == LengthList{ 7, 7, 7, 7, 7, 4, 3 });

    CHECK_THROWS(three_lists(7, k_n_certificate(7, LengthList{ 6, 6, 5, 4 }), k_n_certificate(7, LengthList{ 7, 7, 7 }),
                LengthList{ 7 }));
}

TEST_CASE("three lists with a 1-factor for even n")
{
    auto d2 = k_n_certificate(6, LengthList{ 4, 4, 4 });
    REQUIRE(d2.packing.matching);

    auto base = three_lists_one_factor(6, d2, LengthList{ 6, 3, 3 }, OneFactorVariant::Base, budget);
    CHECK(verify(base).accepted);
    CHECK(base.claimed == LengthList{ 6, 6, 4, 4, 4, 3, 3 });

    auto four = three_lists_one_factor(6, d2, LengthList{ 6, 2, 2, 2 }, OneFactorVariant::SwapFour, budget);
    CHECK(verify(four).accepted);
    CHECK(four.claimed == LengthList{ 6, 6, 4, 4, 3, 3, 2, 2 });

    auto five = three_lists_one_factor(6, k_n_certificate(6, LengthList{ 5, 4, 3 }), LengthList{ 6, 2, 2, 2 },
            OneFactorVariant::SwapFive, budget);
    CHECK(verify(five).accepted);
    CHECK(five.claimed == LengthList{ 6, 6, 4, 3, 3, 3, 3, 2 });

    CHECK_THROWS_AS(three_lists_one_factor(6, d2, LengthList{ 6, 2, 2, 2 }, OneFactorVariant::SwapFive, budget),
            PreconditionError);
    CHECK_THROWS_AS(three_lists_one_factor(6, d2, LengthList{ 3, 3, 3, 3 }, OneFactorVariant::Base, budget),
            PreconditionError);
}
