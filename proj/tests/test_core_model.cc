#include <doctest.h>

#include <cycdec/certificate_io.hh>
#include <cycdec/flower.hh>
#include <cycdec/packing.hh>

#include <algorithm>
#include <numeric>
#include <random>

using namespace cycdec;

namespace
{
    auto edges_at_distance(int n, int d) -> int
    {
        int count = 0;
        for (int i = 0 ; i < n ; ++i)
            for (int j = i + 1 ; j < n ; ++j)
                if (std::min(j - i, n - (j - i)) == d)
                    ++count;
        return count;
    }
}

TEST_CASE("complete multigraph sizes")
{
    auto k3 = complete_multigraph(1, 3);
    CHECK(k3.edge_count() == 3);
    CHECK(k3.mult(0, 2) == 1);
    CHECK(complete_multigraph(2, 4).edge_count() == 12);
    auto g = complete_multigraph(3, 5);
    CHECK(g.edge_count() == 30);
    for (int u = 0 ; u < 5 ; ++u)
        for (int v = 0 ; v < 5 ; ++v)
            if (u != v)
                CHECK(g.mult(u, v) == 3);
}

TEST_CASE("circulants")
{
    int d12[] = { 1, 2 };
    CHECK(circulant(5, d12) == complete_multigraph(1, 5));

    int d4[] = { 4 };
    auto m = circulant(8, d4);
    CHECK(m.edge_count() == edges_at_distance(8, 4));
    CHECK(m.edge_count() == 4);
    for (int v = 0 ; v < 8 ; ++v)
        CHECK(m.degree(v) == 1);

    auto c6 = circulant(6, d12);
    CHECK(c6.edge_count() == edges_at_distance(6, 1) + edges_at_distance(6, 2));
    CHECK(c6.edge_count() == 12);
    for (int v = 0 ; v < 6 ; ++v)
        CHECK(c6.degree(v) == 4);

    int bad[] = { 4 };
    CHECK_THROWS(circulant(7, bad));
}

TEST_CASE("cycle canonical form")
{
    Cycle c{ 3, 1, 4, 0, 2 };
    auto k = c.canonical();
    CHECK(k == Cycle{ 0, 2, 3, 1, 4 });
    CHECK(k.canonical() == k);
    Cycle rotated{ 4, 0, 2, 3, 1 };
    Cycle reflected{ 2, 0, 4, 1, 3 };
    CHECK(rotated.canonical() == k);
    CHECK(reflected.canonical() == k);
    CHECK(Cycle{ 5, 2 }.canonical() == Cycle{ 2, 5 });
    CHECK(Cycle{ 2, 2, 3 }.valid(4) == false);
    CHECK(Cycle{ 1 }.valid(4) == false);
    CHECK(Cycle{ 0, 4 }.valid(4) == false);
}

TEST_CASE("length lists")
{
    LengthList m{ 2, 5, 3, 5 };
    CHECK(m.to_string() == "(5,5,3,2)");
    CHECK(m.sum() == 15);
    CHECK(m.nu(5) == 2);
    CHECK(m.nu(4) == 0);
    CHECK((m - LengthList{ 5, 2 }) == LengthList{ 5, 3 });
    CHECK_THROWS((m - LengthList{ 4 }));
    CHECK((m + LengthList{ 4 }) == LengthList{ 5, 5, 4, 3, 2 });
    CHECK(LengthList::parse("3,3,2") == LengthList{ 3, 3, 2 });
    CHECK(LengthList::parse("") == LengthList{});
    CHECK_THROWS(LengthList::parse("3,x"));
    CHECK(LengthList{ 2, 2, 2 }.larger_than(LengthList{ 3, 3 }));
    CHECK(LengthList{ 4, 2 }.larger_than(LengthList{ 3, 3 }));
    CHECK(! LengthList{ 3, 3 }.larger_than(LengthList{ 4, 2 }));
}

TEST_CASE("leave")
{
    Packing full{ 2, 3, { Cycle{ 0, 1, 2 }, Cycle{ 0, 1, 2 } }, std::nullopt };
    CHECK(leave(full).empty());

    Packing one{ 2, 3, { Cycle{ 0, 1, 2 } }, std::nullopt };
    CHECK(leave(one) == complete_multigraph(1, 3));

    Packing twice{ 2, 5, { Cycle{ 0, 1, 2, 3, 4 }, Cycle{ 0, 1, 2, 3, 4 } }, std::nullopt };
    int d2[] = { 2 };
    auto expected = circulant(5, d2);
    expected += circulant(5, d2);
    CHECK(leave(twice) == expected);

    Packing over{ 2, 3, { Cycle{ 0, 1 }, Cycle{ 0, 1 } }, std::nullopt };
    try {
        leave(over);
        FAIL("expected overflow");
    }
    catch (const MultiplicityOverflow & e) {
        CHECK(e.u == 0);
        CHECK(e.v == 1);
    }
}

TEST_CASE("verify")
{
    auto c1 = make_certificate(Packing{ 2, 3, { Cycle{ 0, 1, 2 }, Cycle{ 0, 1, 2 } }, std::nullopt });
    CHECK(verify(c1).accepted);

    auto c2 = make_certificate(Packing{ 1, 4, { Cycle{ 0, 1, 2, 3 } }, Matching{ { 0, 2 }, { 1, 3 } } });
    CHECK(verify(c2).accepted);

    auto c3 = make_certificate(Packing{ 2, 3, { Cycle{ 0, 1 }, Cycle{ 0, 1 }, Cycle{ 1, 2 } }, std::nullopt });
    auto v3 = verify(c3);
    CHECK(! v3.accepted);
    CHECK(v3.reason == RejectReason::MultiplicityOverflow);
    CHECK(v3.detail.find("{0,1}") != std::string::npos);

    auto short_cert = c1;
    short_cert.packing.cycles.pop_back();
    CHECK(verify(short_cert).reason == RejectReason::Undercoverage);

    auto wrong = c1;
    wrong.claimed = LengthList{ 2, 2, 2 };
    CHECK(verify(wrong).reason == RejectReason::LengthMismatch);

    auto parity = c1;
    parity.packing.matching = Matching{};
    CHECK(verify(parity).reason == RejectReason::MatchingParity);

    auto bad = c1;
    bad.packing.cycles[0] = Cycle{ 0, 0, 1 };
    CHECK(verify(bad).reason == RejectReason::BadCycle);
}

TEST_CASE("vertex maps preserve verdicts")
{
    auto c = make_certificate(Packing{ 2, 3, { Cycle{ 0, 1, 2 }, Cycle{ 0, 1, 2 } }, std::nullopt });
    std::vector<Vertex> id{ 0, 1, 2 }, swap{ 1, 0, 2 };
    CHECK(apply_vertex_map(c.packing, id).cycles == c.packing.cycles);
    auto mapped = Certificate{ apply_vertex_map(c.packing, swap), c.claimed };
    CHECK(verify(mapped).accepted);
    std::vector<Vertex> not_bijective{ 0, 0, 2 };
    CHECK_THROWS_AS(apply_vertex_map(c.packing, not_bijective), std::invalid_argument);

    auto k4 = make_certificate(Packing{ 1, 4, { Cycle{ 0, 1, 2, 3 } }, Matching{ { 0, 2 }, { 1, 3 } } });
    std::mt19937 rng(7);
    for (int trial = 0 ; trial < 50 ; ++trial) {
        std::vector<Vertex> pi(4);
        std::iota(pi.begin(), pi.end(), 0);
        std::shuffle(pi.begin(), pi.end(), rng);
        Certificate image{ apply_vertex_map(k4.packing, pi), k4.claimed };
        CHECK(verify(image).accepted == verify(k4).accepted);
        auto broken = k4;
        broken.packing.cycles[0] = Cycle{ 0, 1, 2 };
        Certificate broken_image{ apply_vertex_map(broken.packing, pi), broken.claimed };
        CHECK(verify(broken_image).reason == verify(broken).reason);
    }
}

TEST_CASE("aligning two Hamilton cycles gives 2-cycles")
{
    // H1 and H2 decompose... two copies of the same n-cycle are n 2-cycles.
    Cycle h1{ 0, 1, 2, 3, 4 };
    Cycle h2{ 3, 0, 4, 2, 1 };
    std::vector<Vertex> map(5);
    for (int i = 0 ; i < 5 ; ++i)
        map[h2[i]] = h1[i];
    Packing p{ 2, 5, { h2 }, std::nullopt };
    auto q = apply_vertex_map(p, map);
    CHECK(same_cycle(q.cycles[0], h1));
    Multigraph doubled(5);
    h1.add_to(doubled);
    q.cycles[0].add_to(doubled);
    for (auto [u, v] : h1.edges())
        CHECK(doubled.mult(u, v) == 2);
}

TEST_CASE("flower detection")
{
    Multigraph g(5);
    g.add_edge(0, 1, 2);
    g.add_edge(0, 2, 2);
    auto f = detect_flower(g);
    REQUIRE(f);
    CHECK(f->centre == 0);
    CHECK(f->petal_lengths() == LengthList{ 2, 2 });

    auto c5 = Cycle{ 0, 1, 2, 3, 4 }.as_graph(5);
    auto f5 = detect_flower(c5);
    REQUIRE(f5);
    CHECK(f5->petals.size() == 1);
    CHECK(f5->petal_lengths() == LengthList{ 5 });

    Multigraph two(5);
    Cycle{ 0, 1, 2 }.add_to(two);
    Cycle{ 3, 4 }.add_to(two);
    CHECK(! detect_flower(two));

    Multigraph big(7);
    Cycle{ 0, 1, 2, 3 }.add_to(big);
    Cycle{ 0, 4, 5 }.add_to(big);
    Cycle{ 0, 6 }.add_to(big);
    auto fb = detect_flower(big);
    REQUIRE(fb);
    CHECK(fb->centre == 0);
    CHECK(fb->petal_lengths() == LengthList{ 4, 3, 2 });

    Multigraph two_centres(6);
    Cycle{ 0, 1, 2 }.add_to(two_centres);
    Cycle{ 0, 3, 4 }.add_to(two_centres);
    Cycle{ 1, 5 }.add_to(two_centres);
    CHECK(! detect_flower(two_centres));
}

TEST_CASE("edge conservation and even leave")
{
    Packing p{ 2, 5, { Cycle{ 0, 1, 2 }, Cycle{ 0, 3 }, Cycle{ 1, 2, 3, 4 } }, std::nullopt };
    REQUIRE(check_packing(p).accepted);
    auto l = leave(p);
    CHECK(l.is_even());
    CHECK(complete_multigraph(2, 5).edge_count() == p.lengths().sum() + l.edge_count());
}

TEST_CASE("certificate json round trip")
{
    auto c = make_certificate(Packing{ 1, 4, { Cycle{ 0, 1, 2, 3 } }, Matching{ { 0, 2 }, { 1, 3 } } });
    auto text = to_json(c.packing);
    CHECK(text == R"({"cycles":[[0,1,2,3]],"lambda":1,"matching":[[0,2],[1,3]],"n":4})");
    auto back = certificate_from_json(text);
    CHECK(back.packing.cycles == c.packing.cycles);
    CHECK(back.packing.matching == c.packing.matching);
    CHECK(verify(back).accepted);
    CHECK_THROWS_AS(certificate_from_json("{\"lambda\": 1"), ParseError);
    CHECK(to_text(c.packing) == "(0,1,2,3)\n0 2\n1 3\n");
}
