#include "loopspace/graded_algebra.hpp"

#include <doctest.h>

#include <random>
#include <vector>

namespace loopspace {
namespace {

AlgebraPtr projective_plane() {
    auto a = Algebra::create("p2", {{"x", 2, Origin::base}, {"y", 5, Origin::base}},
                             {{"x", 3}}, 24);
    a->set_differential({{"y", power(generator_element(a, "x"), 3)}});
    return a;
}

AlgebraPtr mixed_free() {
    auto a = Algebra::create("mixed",
                             {{"x", 2, Origin::base},
                              {"y", 3, Origin::base},
                              {"u", 4, Origin::base},
                              {"v", 5, Origin::base}},
                             {}, 20);
    a->set_differential({});
    return a;
}

// Coefficients of the Hilbert series up to degree top, computed by plain
// integer convolution: an odd generator contributes 1 + t^d, an even one the
// geometric series cut at its truncation.
std::vector<long long> hilbert_counts(const AlgebraPtr& alg, int top) {
    std::vector<long long> out(static_cast<size_t>(top) + 1, 0);
    out[0] = 1;
    for (int i = 0; i < alg->generator_count(); ++i) {
        const Generator& g = alg->generator(i);
        int bound = g.is_odd() ? 2 : alg->truncation(i);
        std::vector<long long> next(out.size(), 0);
        for (int e = 0; bound == 0 || e < bound; ++e) {
            long long shift = static_cast<long long>(e) * g.degree;
            if (shift > top)
                break;
            for (size_t a = 0; a + static_cast<size_t>(shift) < out.size(); ++a)
                next[a + static_cast<size_t>(shift)] += out[a];
        }
        out = next;
    }
    return out;
}

TEST_SUITE("graded_algebra") {

TEST_CASE("rational strings use slash form only when needed") {
    CHECK(to_string(Rational(5)) == "5");
    CHECK(to_string(Rational(-7, 3)) == "-7/3");
    CHECK(to_string(Rational(4, 6)) == "2/3");
}

TEST_CASE("creation validates generators and truncations") {
    CHECK_THROWS_AS(Algebra::create("bad", {{"x", 0, Origin::base}}, {}, 10),
                    ConstructionError);
    CHECK_THROWS_AS(Algebra::create("bad",
                                    {{"x", 2, Origin::base}, {"x", 4, Origin::base}}, {}, 10),
                    ConstructionError);
    CHECK_THROWS_AS(Algebra::create("bad", {{"y", 3, Origin::base}}, {{"y", 2}}, 10),
                    ConstructionError);
    CHECK_THROWS_AS(Algebra::create("bad", {{"x", 2, Origin::base}}, {{"x", 1}}, 10),
                    ConstructionError);
    CHECK_THROWS_AS(Algebra::create("bad", {{"x", 2, Origin::base}}, {{"z", 2}}, 10),
                    ConstructionError);
}

TEST_CASE("generators are sorted by origin, degree, name") {
    auto a = Algebra::create("order",
                             {{"b", 4, Origin::base},
                              {"a", 2, Origin::base},
                              {"abar", 1, Origin::bar1},
                              {"c", 2, Origin::base}},
                             {}, 8);
    CHECK(a->generator(0).name == "a");
    CHECK(a->generator(1).name == "c");
    CHECK(a->generator(2).name == "b");
    CHECK(a->generator(3).name == "abar");
    CHECK(a->index_of("abar") == 3);
    CHECK(a->index_of("missing") == -1);
}

TEST_CASE("monomial counts match the Hilbert series") {
    for (const AlgebraPtr& alg : {projective_plane(), mixed_free()}) {
        std::vector<long long> counts = hilbert_counts(alg, 14);
        for (int n = 0; n <= 14; ++n)
            CHECK(static_cast<long long>(alg->monomial_basis(n).size()) == counts[static_cast<size_t>(n)]);
    }
}

TEST_CASE("monomial basis stops at the cutoff") {
    auto a = projective_plane();
    CHECK_NOTHROW(a->monomial_basis(a->cutoff()));
    CHECK_THROWS_AS(a->monomial_basis(a->cutoff() + 1), CutoffExceededError);
}

TEST_CASE("odd squares and truncated powers vanish") {
    auto a = projective_plane();
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    CHECK((y * y).is_zero());
    CHECK(power(x, 2) == x * x);
    CHECK(power(x, 3).is_zero());
    CHECK_FALSE(power(x, 2).is_zero());
}

TEST_CASE("multiplication is graded commutative") {
    auto a = mixed_free();
    std::mt19937 rng(2026);
    const std::vector<int> degrees = {2, 3, 4, 5, 7, 9};
    for (int trial = 0; trial < 120; ++trial) {
        int du = degrees[rng() % degrees.size()];
        int dv = degrees[rng() % degrees.size()];
        const auto& bu = a->monomial_basis(du);
        const auto& bv = a->monomial_basis(dv);
        Element u = monomial_element(a, bu[rng() % bu.size()]);
        Element v = monomial_element(a, bv[rng() % bv.size()]);
        Element uv = u * v;
        Element vu = v * u;
        if (du % 2 == 1 && dv % 2 == 1)
            CHECK(uv == -vu);
        else
            CHECK(uv == vu);
    }
}

TEST_CASE("multiplication is associative and distributive") {
    auto a = projective_plane();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Element u = Element::zero(a), v = Element::zero(a), w = Element::zero(a);
        for (Element* e : {&u, &v, &w}) {
            int deg = 2 + static_cast<int>(rng() % 6u);
            const auto& basis = a->monomial_basis(deg);
            if (!basis.empty()) {
                int c = static_cast<int>(rng() % 7u) - 3;
                *e += monomial_element(a, basis[rng() % basis.size()], Rational(c));
            }
        }
        CHECK((u * v) * w == u * (v * w));
        CHECK(u * (v + w) == u * v + u * w);
    }
}

TEST_CASE("degree and homogeneous parts") {
    auto a = projective_plane();
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    Element e = x + y;
    CHECK_FALSE(e.is_homogeneous());
    CHECK_THROWS_AS(e.degree(), AlgebraError);
    CHECK(e.homogeneous_part(2) == x);
    CHECK(e.homogeneous_part(5) == y);
    CHECK(e.homogeneous_part(3).is_zero());
    CHECK((x * x).degree() == 4);
    CHECK(Element::zero(a).degree() == 0);
}

TEST_CASE("default elements are a universal zero") {
    auto a = projective_plane();
    Element nothing;
    CHECK(nothing.is_zero());
    Element x = generator_element(a, "x");
    CHECK(nothing + x == x);
    CHECK(x - nothing == x);
    CHECK((nothing * x).is_zero());
}

TEST_CASE("elements of different algebras do not combine") {
    auto a = projective_plane();
    auto b = mixed_free();
    CHECK_THROWS_AS(generator_element(a, "x") + generator_element(b, "x"),
                    DomainMismatchError);
}

TEST_CASE("strings are canonical") {
    auto a = projective_plane();
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    CHECK(unit(a).str() == "1");
    CHECK(Element::zero(a).str() == "0");
    CHECK((Rational(2) * x).str() == "2*x");
    CHECK((x * x - Rational(1, 2) * y).str() == "-1/2*y + x^2");
    CHECK((-x).str() == "-x");
}

TEST_CASE("the differential satisfies the Leibniz rule") {
    auto a = projective_plane();
    std::mt19937 rng(7);
    for (int trial = 0; trial < 120; ++trial) {
        int du = 2 + static_cast<int>(rng() % 7u);
        int dv = 2 + static_cast<int>(rng() % 7u);
        const auto& bu = a->monomial_basis(du);
        const auto& bv = a->monomial_basis(dv);
        if (bu.empty() || bv.empty())
            continue;
        Element u = monomial_element(a, bu[rng() % bu.size()]);
        Element v = monomial_element(a, bv[rng() % bv.size()]);
        Rational sign = du % 2 == 0 ? 1 : -1;
        CHECK(differential(u * v) == differential(u) * v + sign * (u * differential(v)));
    }
}

TEST_CASE("d squared vanishes where it should and is witnessed where not") {
    CHECK(validate_d_squared(projective_plane(), 20).pass);

    auto bad = Algebra::create("bad",
                               {{"x", 2, Origin::base},
                                {"y", 3, Origin::base},
                                {"u", 4, Origin::base}},
                               {{"x", 4}}, 12);
    Element x = generator_element(bad, "x");
    Element y = generator_element(bad, "y");
    bad->set_differential({{"y", x * x}, {"u", x * y}});
    DSquaredReport r = validate_d_squared(bad, 12);
    CHECK_FALSE(r.pass);
    CHECK(r.witness_degree == 4);
    CHECK(bad->monomial_label(r.witness) == "u");
    CHECK(r.witness_value == x * x * x);
}

TEST_CASE("differential values are checked for degree and homogeneity") {
    auto a = Algebra::create("d", {{"x", 2, Origin::base}, {"y", 3, Origin::base}}, {}, 10);
    Element x = generator_element(a, "x");
    CHECK_THROWS_AS(a->set_differential({{"y", x}}), ConstructionError);
}

TEST_CASE("the differential can be attached only once") {
    auto a = Algebra::create("once", {{"x", 2, Origin::base}, {"y", 3, Origin::base}}, {}, 10);
    Element x = generator_element(a, "x");
    a->set_differential({{"y", x * x}});
    CHECK_THROWS_AS(a->set_differential({{"y", x * x}}), ConstructionError);
}

TEST_CASE("derivations extend by the graded Leibniz rule") {
    auto a = mixed_free();
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    DerivationSpec s{-1, {}};
    s.values["y"] = unit(a);
    s.values["x"] = Element::zero(a);
    s.values["u"] = Element::zero(a);
    s.values["v"] = Element::zero(a);
    // s(y) = 1, so s(x y) = (-1)^{|x|} x s(y) = x and s(y x) agrees by
    // commutativity.
    CHECK(apply_derivation(s, x * y) == x);
    CHECK(apply_derivation(s, y * x) == x);

    DerivationSpec incomplete{-1, {{"y", unit(a)}}};
    CHECK_THROWS_AS(apply_derivation(incomplete, x * y), IncompleteDerivationError);
    CHECK(apply_derivation(incomplete, y * y + Element::zero(a)).is_zero());
}

TEST_CASE("tensor renames copies and transports differentials") {
    auto a = Algebra::create("sphere", {{"x", 2, Origin::base}, {"y", 3, Origin::base}},
                             {}, 12);
    a->set_differential({{"y", power(generator_element(a, "x"), 2)}});
    AlgebraPtr t = tensor(a, a);
    CHECK(t->generator_count() == 4);
    CHECK(t->generator(t->index_of("x1")).origin == Origin::copy1);
    CHECK(t->generator(t->index_of("y2")).origin == Origin::copy2);
    Element x1 = generator_element(t, "x1");
    Element x2 = generator_element(t, "x2");
    CHECK(t->differential_of(t->index_of("y1")) == x1 * x1);
    CHECK(t->differential_of(t->index_of("y2")) == x2 * x2);
    CHECK(validate_d_squared(t, 12).pass);

    std::vector<long long> ca = hilbert_counts(a, 10);
    std::vector<long long> ct = hilbert_counts(t, 10);
    for (int n = 0; n <= 10; ++n) {
        long long conv = 0;
        for (int i = 0; i <= n; ++i)
            conv += ca[static_cast<size_t>(i)] * ca[static_cast<size_t>(n - i)];
        CHECK(ct[static_cast<size_t>(n)] == conv);
        CHECK(static_cast<long long>(t->monomial_basis(n).size()) == conv);
    }
}

TEST_CASE("morphisms are multiplicative and compose") {
    auto a = Algebra::create("src", {{"x", 2, Origin::base}, {"y", 3, Origin::base}}, {}, 12);
    a->set_differential({{"y", power(generator_element(a, "x"), 2)}});
    auto b = Algebra::create("mid", {{"s", 2, Origin::base}, {"t", 3, Origin::base}}, {}, 12);
    b->set_differential({{"t", power(generator_element(b, "s"), 2)}});
    auto c = Algebra::create("dst", {{"z", 2, Origin::base}}, {{"z", 3}}, 12);
    c->set_differential({});

    Morphism f{a, b, {{"x", generator_element(b, "s")}, {"y", generator_element(b, "t")}}};
    Morphism g{b, c, {{"s", generator_element(c, "z")}, {"t", Element::zero(c)}}};
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    CHECK(apply(f, x * x + Rational(2) * y) ==
          power(generator_element(b, "s"), 2) + Rational(2) * generator_element(b, "t"));
    Morphism gf = compose(g, f);
    CHECK(apply(gf, x * y) == apply(g, apply(f, x * y)));
    CHECK(apply(gf, power(x, 2)) == power(generator_element(c, "z"), 2));
    CHECK(apply(gf, power(x, 3)).is_zero());

    CHECK(verify_chain_map(f, 10).pass);
    ChainMapReport broken = verify_chain_map(g, 10);
    CHECK_FALSE(broken.pass);
    CHECK(b->monomial_label(broken.witness) == "t");
    CHECK(broken.witness_degree == 3);
}

TEST_CASE("linear maps act monomial by monomial with a degree shift") {
    auto a = projective_plane();
    LinearMap doubling{a, a, 0, [&](const ExpVec& exps) {
                           return monomial_element(a, exps, Rational(2));
                       }};
    Element x = generator_element(a, "x");
    Element y = generator_element(a, "y");
    CHECK(apply(doubling, x + y) == Rational(2) * (x + y));
    CHECK(apply(doubling, Element::zero(a)).is_zero());
}

TEST_CASE("bar word length counts suspended factors") {
    auto a = Algebra::create("bars",
                             {{"x", 2, Origin::base},
                              {"xbar", 1, Origin::bar1},
                              {"ybar", 2, Origin::bar1}},
                             {}, 12);
    Element m = generator_element(a, "x") * generator_element(a, "xbar") *
                power(generator_element(a, "ybar"), 2);
    CHECK(a->bar_word_length(m.terms().begin()->first) == 3);
    CHECK(a->degree_of(m.terms().begin()->first) == 7);
}

}  // TEST_SUITE

}  // namespace
}  // namespace loopspace
