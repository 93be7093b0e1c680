#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "uglab/error.hpp"
#include "uglab/exactcomb.hpp"
#include "uglab/groups.hpp"
#include "uglab/randmat.hpp"

using namespace uglab;
using namespace uglab::groups;
using matcore::CMatrix;
using matcore::cplx;

TEST_CASE("orders and dimensions") {
    CHECK(group_order(HyperOct{2}) == 8);
    CHECK(group_order(SymmetricAsUnitary{4}) == 24);
    CHECK(group_order(DiagSign{5}) == 32);
    CHECK(group_order(DiagRoots{3, 4}) == 64);
    CHECK(dimension(HyperOct{7}) == 7);
}

TEST_CASE("element matrices") {
    // identity
    const auto id = identity_element(HyperOct{3});
    CHECK(matcore::max_entry_dist(element_matrix(HyperOct{3}, id).mat(), CMatrix::identity(3)) ==
          0.0);
    // sigma = (2,1) one-based with signs (+1, -1): [[0,1],[-1,0]]
    SignedPerm e;
    e.perm.map = {1, 0};
    e.signs = {1, -1};
    const CMatrix m = element_matrix(HyperOct{2}, e).mat();
    CHECK(m(0, 1) == cplx(1.0, 0.0));
    CHECK(m(1, 0) == cplx(-1.0, 0.0));
    CHECK(m(0, 0) == cplx(0.0, 0.0));
    // diag roots pattern
    RootVector r{4, {0, 1, 2}};
    const CMatrix rm = element_matrix(DiagRoots{3, 4}, r).mat();
    CHECK(std::abs(rm(1, 1) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(rm(2, 2) - cplx(-1.0, 0.0)) < 1e-15);
    // handle mismatch
    CHECK_THROWS_AS(element_matrix(HyperOct{2}, identity_element(DiagSign{2})), DomainError);
}

TEST_CASE("characters match traces") {
    SeededRng rng(17);
    const GroupSpec specs[] = {HyperOct{5}, SymmetricAsUnitary{5}, DiagSign{5}, DiagRoots{4, 6}};
    for (const auto& spec : specs) {
        CHECK(character(spec, identity_element(spec)).real() ==
              doctest::Approx(dimension(spec)).epsilon(1e-14));
        for (int rep = 0; rep < 20; ++rep) {
            const Element g = sample_uniform(spec, rng);
            const cplx chi = character(spec, g);
            const cplx tr = matcore::trace(element_matrix(spec, g).mat());
            CHECK(std::abs(chi - tr) <= 1e-12);
        }
    }
    // derangement -> zero fixed points -> character 0
    SignedPerm e;
    e.perm.map = {1, 2, 0};
    e.signs = {1, -1, 1};
    CHECK(character(HyperOct{3}, e) == cplx(0.0, 0.0));
}

TEST_CASE("compose and inverse agree with matrix arithmetic") {
    SeededRng rng(23);
    const GroupSpec specs[] = {HyperOct{4}, SymmetricAsUnitary{4}, DiagSign{4}, DiagRoots{3, 5}};
    for (const auto& spec : specs) {
        for (int rep = 0; rep < 20; ++rep) {
            const Element g = sample_uniform(spec, rng);
            const Element h = sample_uniform(spec, rng);
            const Element k = sample_uniform(spec, rng);
            // matrix homomorphism
            const CMatrix lhs = element_matrix(spec, compose(spec, g, h)).mat();
            const CMatrix rhs = element_matrix(spec, g).mat() * element_matrix(spec, h).mat();
            CHECK(matcore::max_entry_dist(lhs, rhs) <= 1e-12);
            // inverse
            CHECK(elements_equal(spec, compose(spec, g, inverse(spec, g)),
                                 identity_element(spec)));
            // associativity
            CHECK(elements_equal(spec, compose(spec, compose(spec, g, h), k),
                                 compose(spec, g, compose(spec, h, k))));
            // character of the inverse is the conjugate
            const cplx ci = character(spec, inverse(spec, g));
            CHECK(std::abs(ci - std::conj(character(spec, g))) <= 1e-12);
        }
    }
}

TEST_CASE("uniform sampling matches exact tails") {
    const int d = 4;
    const long n = 100000;
    SeededRng rng(314);
    std::vector<long> tail_counts(2 * d + 2, 0);
    long diag_plus = 0;
    for (long s = 0; s < n; ++s) {
        const Element g = sample_uniform(HyperOct{d}, rng);
        const long tr = std::lround(character(HyperOct{d}, g).real());
        for (long k = -d; k <= d; ++k)
            if (tr > k) ++tail_counts[k + d];
        const Element ds = sample_uniform(DiagSign{d}, rng);
        if (std::get<SignVector>(ds).signs[0] > 0) ++diag_plus;
    }
    for (long k = -d; k < d; ++k) {
        const double p = exactcomb::char_tail_hyperoct(d, k).get_d();
        const double sem = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(tail_counts[k + d] / static_cast<double>(n) - p) <= 4.0 * sem + 1e-12);
    }
    CHECK(std::abs(diag_plus / static_cast<double>(n) - 0.5) <= 4.0 * 0.5 / std::sqrt(n));
}

TEST_CASE("enumerate_elements is canonical and complete") {
    const auto elems = enumerate_elements(HyperOct{2}, 100);
    REQUIRE(elems.size() == 8);
    std::set<std::string> keys;
    for (const auto& g : elems) keys.insert(element_key(HyperOct{2}, g));
    CHECK(keys.size() == 8);
    CHECK_THROWS_AS(enumerate_elements(HyperOct{10}, 100), DomainError);
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible(HyperOct{2}));
    CHECK(is_irreducible(HyperOct{8}));
    CHECK_FALSE(is_irreducible(DiagSign{2}));
    CHECK_FALSE(is_irreducible(DiagSign{8}));
    CHECK(is_irreducible(DiagSign{1}));
    CHECK_FALSE(is_irreducible(SymmetricAsUnitary{4}));
    CHECK(is_irreducible(DiagRoots{1, 8}));
    CHECK_FALSE(is_irreducible(DiagRoots{3, 4}));
    // Q8 in U(2) is irreducible
    const GroupSpec q8 = parse_group_spec("q8");
    CHECK(is_irreducible(q8));
    // trivial group in U(2) is not
    const auto triv = enumerate_closure({CMatrix::identity(2)}, 1e-9, 10);
    CHECK_FALSE(is_irreducible(GroupSpec(triv.spec)));
}

TEST_CASE("closure of {-I} and Q8") {
    const auto minus = enumerate_closure({CMatrix::identity(2) * cplx(-1.0, 0.0)}, 1e-9, 10);
    CHECK(minus.order == 2);
    CHECK(minus.closure_defect <= 1e-9);

    CMatrix gi(2), gj(2);
    gi(0, 0) = cplx(0, 1);
    gi(1, 1) = cplx(0, -1);
    gj(0, 1) = 1.0;
    gj(1, 0) = -1.0;
    const auto q8 = enumerate_closure({gi, gj}, 1e-9, 100);
    CHECK(q8.order == 8);
    // spot-check closure: products of random pairs land on stored elements
    SeededRng rng(5);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t i = rng.uniform_index(8), j = rng.uniform_index(8);
        const std::size_t k = q8.spec.data->product_index(i, j);
        CHECK(k < 8);
        const double dist = matcore::delta_inf(
            q8.spec.data->element(i) * q8.spec.data->element(j), q8.spec.data->element(k));
        CHECK(dist <= 1e-9);
    }
}

TEST_CASE("closure error paths") {
    // irrational rotation: infinite group, cap exceeded
    CMatrix rot(2);
    rot(0, 0) = cplx(std::cos(1.0), std::sin(1.0));
    rot(1, 1) = cplx(std::cos(1.0), -std::sin(1.0));
    CHECK_THROWS_AS((void)enumerate_closure({rot}, 1e-6, 200), ClosureCapError);
    try {
        (void)enumerate_closure({rot}, 1e-6, 200);
    } catch (const ClosureCapError& e) {
        CHECK(e.partial_count >= 200);
    }
    // tolerance ambiguity: rotation by an angle inside [tol, 2 tol)
    const double tol = 1e-6;
    CMatrix tiny(2);
    tiny(0, 0) = cplx(std::cos(1.5 * tol), std::sin(1.5 * tol));
    tiny(1, 1) = cplx(std::cos(1.5 * tol), -std::sin(1.5 * tol));
    CHECK_THROWS_AS((void)enumerate_closure({tiny}, tol, 200), PrecisionError);
    // non-unitary generator
    CMatrix bad = CMatrix::identity(2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS((void)enumerate_closure({bad}, 1e-9, 10), DomainError);
}

namespace {

// Independent oracle: max abelian subgroup order via closures of pairwise
// commuting tuples up to size 4 (enough generators for any abelian subgroup
// of the groups tested here).
std::size_t brute_max_abelian(const EnumeratedGroup& g) {
    const auto* data = g.spec.data.get();
    const std::size_t n = data->size();
    auto commute = [&](std::size_t i, std::size_t j) {
        return data->product_index(i, j) == data->product_index(j, i);
    };
    auto closure_size = [&](std::vector<std::size_t> gens) {
        std::set<std::size_t> have{data->identity_index()};
        for (auto x : gens) have.insert(x);
        std::vector<std::size_t> frontier(have.begin(), have.end());
        while (!frontier.empty()) {
            std::vector<std::size_t> next;
            for (auto x : frontier)
                for (auto y : gens) {
                    const auto p = data->product_index(x, y);
                    if (have.insert(p).second) next.push_back(p);
                }
            frontier = std::move(next);
        }
        return have.size();
    };
    std::size_t best = 1;
    for (std::size_t a = 0; a < n; ++a) {
        best = std::max(best, closure_size({a}));
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!commute(a, b)) continue;
            best = std::max(best, closure_size({a, b}));
            for (std::size_t c = b + 1; c < n; ++c) {
                if (!commute(a, c) || !commute(b, c)) continue;
                best = std::max(best, closure_size({a, b, c}));
                for (std::size_t e = c + 1; e < n; ++e) {
                    if (!commute(a, e) || !commute(b, e) || !commute(c, e)) continue;
                    best = std::max(best, closure_size({a, b, c, e}));
                }
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("abelian index search") {
    // cyclic group: index 1
    CMatrix rot(2);
    const double a = 2.0 * M_PI / 5;
    rot(0, 0) = cplx(std::cos(a), std::sin(a));
    rot(1, 1) = cplx(std::cos(a), -std::sin(a));
    const auto cyc = enumerate_closure({rot}, 1e-9, 100);
    const auto rc = abelian_index_upper(cyc);
    CHECK(rc.index == 1);
    CHECK(rc.exact);
    CHECK(rc.witness_normal);

    // Q8: maximal abelian subgroup has order 4, index 2
    const GroupSpec q8spec = parse_group_spec("q8");
    const auto& q8en = std::get<Enumerated>(q8spec);
    EnumeratedGroup q8{q8en, q8en.data->size(), 0.0};
    const auto rq = abelian_index_upper(q8);
    CHECK(rq.index == 2);
    CHECK(rq.exact);
    CHECK(rq.witness.size() == 4);
    CHECK(brute_max_abelian(q8) == 4);

    // HyperOct{3}, order 48: minimal abelian index 6 via the diagonal {+-1}^3
    const auto h3 = materialize_group(HyperOct{3}, 100);
    const auto rh = abelian_index_upper(h3);
    CHECK(rh.index == 6);
    CHECK(rh.exact);
    CHECK(brute_max_abelian(h3) == 8);
    // witness commutes pairwise (exact integer matrices)
    for (std::size_t x : rh.witness)
        for (std::size_t y : rh.witness)
            CHECK(h3.spec.data->product_index(x, y) == h3.spec.data->product_index(y, x));
    // Jordan sanity: index <= (d+1)!
    CHECK(rh.index <= factorial(4));

    // greedy path (cap below the order) still returns a valid upper bound
    const auto rg = abelian_index_upper(h3, /*exhaustive_cap=*/10);
    CHECK_FALSE(rg.exact);
    CHECK(rg.index >= rh.index);
    CHECK(BigInt(48) % rg.index == 0);
}

TEST_CASE("generator files and group spec strings") {
    CHECK_THROWS_AS(parse_group_spec("nope:3"), DomainError);
    CHECK_THROWS_AS(parse_group_spec("hyperoct"), DomainError);
    CHECK_THROWS_AS(parse_group_spec("hyperoct:0"), DomainError);
    const GroupSpec h = parse_group_spec("hyperoct:6");
    CHECK(dimension(h) == 6);
    const GroupSpec dr = parse_group_spec("diag-roots:2:4");
    CHECK(group_order(dr) == 16);
}

TEST_CASE("materialized structured group matches exact paths") {
    const auto h2 = materialize_group(HyperOct{2}, 100);
    CHECK(h2.order == 8);
    CHECK(h2.closure_defect <= 1e-12);
    CHECK(is_irreducible(GroupSpec(h2.spec)) == is_irreducible(GroupSpec(HyperOct{2})));
}
