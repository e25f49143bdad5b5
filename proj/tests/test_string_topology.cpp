#include "loopspace/string_topology.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

namespace loopspace {
namespace {

using testing::random_element;
using testing::read_model_file;

struct Fixture {
    LoopModelBundle bundle;
    CohomologyTable base_table;
    DualBasis dual;
    LinearMap shriek;

    explicit Fixture(const char* stem, int cutoff, bool negate = false)
        : bundle(build_loop_bundle(read_model_file(stem), cutoff)),
          base_table(compute_cohomology(bundle.base, bundle.dimension)),
          dual(poincare_dual_basis(base_table, bundle.fundamental, bundle.dimension, negate)),
          shriek(shriek_map(bundle, dual)) {}
};

TEST_SUITE("string_topology") {

TEST_CASE("dual bases pair to the identity against the orientation") {
    Fixture f("cp2", 12);
    const DualBasis& db = f.dual;
    CHECK(db.euler_characteristic == 3);
    REQUIRE(db.classes.size() == 3);
    CHECK(evaluate_top(db, f.base_table, db.orientation) == 1);
    Element x = generator_element(f.bundle.base, "x");
    CHECK(db.duals[0] == x * x);
    CHECK(db.duals[1] == x);
    CHECK(db.duals[2] == unit(f.bundle.base));
    for (size_t i = 0; i < db.classes.size(); ++i) {
        for (size_t j = 0; j < db.classes.size(); ++j) {
            if (db.classes[i].degree != db.classes[j].degree)
                continue;
            Rational expected = i == j ? 1 : 0;
            CHECK(evaluate_top(db, f.base_table,
                               db.duals[i] * db.classes[j].representative) == expected);
        }
    }
}

TEST_CASE("negating the orientation flips evaluations and dual classes") {
    Fixture plain("cp1", 10);
    Fixture flipped("cp1", 10, true);
    Element x = generator_element(plain.bundle.base, "x");
    CHECK(evaluate_top(plain.dual, plain.base_table, x) == 1);
    Element xf = generator_element(flipped.bundle.base, "x");
    CHECK(evaluate_top(flipped.dual, flipped.base_table, xf) == -1);
    CHECK(flipped.dual.euler_characteristic == plain.dual.euler_characteristic);
    AlgebraPtr sq = tensor(flipped.bundle.base, flipped.bundle.base);
    Element x1 = generator_element(sq, "x1");
    Element x2 = generator_element(sq, "x2");
    CHECK(diagonal_euler_class(flipped.dual, sq) == -(x1 + x2));
}

TEST_CASE("duality construction rejects degenerate inputs") {
    // The top degree has no cohomology at all.
    ModelDescription empty = parse_model("generator x : 2\ngenerator y : 3\nd y = x^2\n"
                                         "dimension 4\nfundamental x^2\n");
    LoopModelBundle be = build_loop_bundle(empty, 10);
    CohomologyTable te = compute_cohomology(be.base, 4);
    CHECK_THROWS_AS(poincare_dual_basis(te, be.fundamental, 4, false), PoincareDualityError);

    // Top cohomology has two classes.
    ModelDescription wide = parse_model("generator a : 2\ngenerator b : 4\n"
                                        "dimension 6\nfundamental a*b\n");
    LoopModelBundle bw = build_loop_bundle(wide, 10);
    CohomologyTable tw = compute_cohomology(bw.base, 6);
    CHECK_THROWS_AS(poincare_dual_basis(tw, bw.fundamental, 6, false), PoincareDualityError);

    // Top cohomology is a line but the chosen monomial is a coboundary.
    ModelDescription exact = parse_model("generator x : 2\ngenerator y : 3\n"
                                         "generator a : 4\nd y = x^2\n"
                                         "dimension 4\nfundamental x^2\n");
    LoopModelBundle bx = build_loop_bundle(exact, 10);
    CohomologyTable tx = compute_cohomology(bx.base, 4);
    CHECK_THROWS_AS(poincare_dual_basis(tx, bx.fundamental, 4, false), PoincareDualityError);
}

TEST_CASE("diagonal classes of the sample spaces") {
    struct Sample {
        const char* stem;
        int cutoff;
        int chi;
    };
    for (const Sample& s : {Sample{"cp1", 10, 2}, Sample{"cp2", 12, 3}, Sample{"s2", 10, 2},
                            Sample{"s3", 10, 0}, Sample{"s5", 12, 0}}) {
        Fixture f(s.stem, s.cutoff);
        CHECK(f.dual.euler_characteristic == s.chi);
        AlgebraPtr sq = tensor(f.bundle.base, f.bundle.base);
        Element e = diagonal_euler_class(f.dual, sq);
        Morphism merge = merge_copies(sq, f.bundle.base, false);
        Element omega = monomial_element(f.bundle.base, f.bundle.fundamental);
        CHECK(apply(merge, e) == Rational(s.chi) * omega);
    }
    Fixture cp1("cp1", 10);
    AlgebraPtr sq = tensor(cp1.bundle.base, cp1.bundle.base);
    CHECK(diagonal_euler_class(cp1.dual, sq) ==
          generator_element(sq, "x1") + generator_element(sq, "x2"));
    Fixture s3("s3", 10);
    AlgebraPtr sq3 = tensor(s3.bundle.base, s3.bundle.base);
    CHECK(diagonal_euler_class(s3.dual, sq3) ==
          generator_element(sq3, "x1") - generator_element(sq3, "x2"));
    Fixture cp2("cp2", 12);
    AlgebraPtr sq2 = tensor(cp2.bundle.base, cp2.bundle.base);
    Element x1 = generator_element(sq2, "x1");
    Element x2 = generator_element(sq2, "x2");
    CHECK(diagonal_euler_class(cp2.dual, sq2) == x1 * x1 + x1 * x2 + x2 * x2);
}

TEST_CASE("the wrong-way map multiplies by the two-copy Euler class") {
    Fixture f("cp1", 10);
    Element e = euler_class_delta_in(f.dual, f.bundle.mprime);
    Element x1 = generator_element(f.bundle.mprime, "x1");
    Element x2 = generator_element(f.bundle.mprime, "x2");
    CHECK(e == x1 + x2);
    CHECK(apply(f.shriek, unit(f.bundle.fiber_product)) == e);
    Element probe = generator_element(f.bundle.fiber_product, "x") *
                    generator_element(f.bundle.fiber_product, "xbar1");
    Element xbar1 = generator_element(f.bundle.mprime, "xbar1");
    CHECK(apply(f.shriek, probe) == Rational(1, 2) * (x1 + x2) * xbar1 * (x1 + x2));
}

TEST_CASE("anticommutation holds exactly when the truncations realize duality") {
    Fixture cp1("cp1", 10);
    CHECK(verify_shriek_anticommutation(cp1.bundle, cp1.shriek, 8).pass);
    Fixture s3("s3", 12);
    CHECK(verify_shriek_anticommutation(s3.bundle, s3.shriek, 9).pass);
    Fixture s2("s2", 10);
    ShriekReport broken = verify_shriek_anticommutation(s2.bundle, s2.shriek, 8);
    CHECK_FALSE(broken.pass);
    CHECK(broken.witness_degree >= 0);
}

TEST_CASE("compression to Euler multiplication holds with and without duality") {
    for (const char* stem : {"cp1", "s2"}) {
        Fixture f(stem, 10);
        Element e = euler_class_delta_in(f.dual, f.bundle.mprime);
        CHECK(verify_shriek_euler_identity(f.bundle, f.shriek, e, 8).pass);
    }
}

TEST_CASE("coproduct golden values on the projective spaces") {
    Fixture f("cp1", 10);
    CohomologyTable loop = compute_cohomology(f.bundle.loop, 9);
    const CohomologyClass& one = loop.classes(0)[0];
    CoproductResult r = dual_loop_coproduct(f.bundle, f.shriek, loop, one, one);
    CHECK(r.degree == 2);
    CHECK(r.coordinates == std::vector<Rational>{Rational(2)});

    const CohomologyClass& xbar = loop.classes(1)[0];
    CHECK(dual_loop_coproduct(f.bundle, f.shriek, loop, one, xbar).coordinates ==
          std::vector<Rational>{Rational(0)});
    CHECK(dual_loop_coproduct(f.bundle, f.shriek, loop, xbar, xbar).coordinates ==
          std::vector<Rational>{Rational(0)});

    Fixture g("cp2", 14);
    CohomologyTable loop2 = compute_cohomology(g.bundle.loop, 13);
    const CohomologyClass& one2 = loop2.classes(0)[0];
    CoproductResult r2 = dual_loop_coproduct(g.bundle, g.shriek, loop2, one2, one2);
    CHECK(r2.degree == 4);
    CHECK(r2.coordinates == std::vector<Rational>{Rational(3)});
    CHECK(loop2.classes(4)[0].label == "x^2");
}

TEST_CASE("the chain coproduct is bilinear") {
    Fixture f("cp1", 10);
    std::mt19937 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        int p = static_cast<int>(rng() % 5u);
        int q = static_cast<int>(rng() % 5u);
        Element u1 = random_element(rng, f.bundle.loop, p);
        Element u2 = random_element(rng, f.bundle.loop, p);
        Element v = random_element(rng, f.bundle.loop, q);
        Rational c(static_cast<int>(rng() % 7u) - 3);
        Element lhs = coproduct_representative(f.bundle, f.shriek, c * u1 + u2, v);
        Element rhs = c * coproduct_representative(f.bundle, f.shriek, u1, v) +
                      coproduct_representative(f.bundle, f.shriek, u2, v);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("coproduct classes do not depend on the representative") {
    Fixture f("cp1", 12);
    CohomologyTable loop = compute_cohomology(f.bundle.loop, 11);
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        int p = static_cast<int>(rng() % 4u);
        int q = static_cast<int>(rng() % 4u);
        const CohomologyClass& cu = loop.classes(p)[0];
        const CohomologyClass& cv = loop.classes(q)[0];
        Element du = p >= 1 ? differential(random_element(rng, f.bundle.loop, p - 1))
                            : Element::zero(f.bundle.loop);
        Element dv = q >= 1 ? differential(random_element(rng, f.bundle.loop, q - 1))
                            : Element::zero(f.bundle.loop);
        Element plain = coproduct_representative(f.bundle, f.shriek, cu.representative,
                                                 cv.representative);
        Element moved = coproduct_representative(f.bundle, f.shriek, cu.representative + du,
                                                 cv.representative + dv);
        int out = p + q + f.bundle.dimension;
        Projection a = project_class(loop, plain, out);
        Projection b = project_class(loop, moved, out);
        CHECK(a.coordinates == b.coordinates);
    }
}

TEST_CASE("hodge components group classes by word length") {
    LoopModelBundle b = build_loop_bundle(read_model_file("cp1"), 10);
    CohomologyTable loop = compute_cohomology(b.loop, 9);
    HodgeDecomposition h = hodge_decomposition(loop, 4);
    REQUIRE(h.components.size() == 1);
    CHECK(h.components[0].word_length == 1);
    CHECK(h.components[0].class_indices == std::vector<int>{0});

    // The two-loop product model mixes word lengths within one degree.
    CohomologyTable sq = compute_cohomology(b.loop_square, 6);
    HodgeDecomposition hs = hodge_decomposition(sq, 3);
    REQUIRE(hs.components.size() == 2);
    CHECK(hs.components[0].word_length == 1);
    CHECK(hs.components[0].class_indices.size() == 2);
    CHECK(hs.components[1].word_length == 2);
    CHECK(hs.components[1].class_indices.size() == 2);
}

TEST_CASE("coproduct outputs add word lengths") {
    Fixture f("cp1", 10);
    CohomologyTable loop = compute_cohomology(f.bundle.loop, 9);
    HodgeReport r = verify_hodge_additivity(f.bundle, f.shriek, loop, 7);
    CHECK(r.pass);
}

}  // TEST_SUITE

}  // namespace
}  // namespace loopspace
