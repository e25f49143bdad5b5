#include "loopspace/string_topology.hpp"

#include <algorithm>
#include <map>

namespace loopspace {

namespace {

Matrix inverse_or_throw(const Matrix& p, const std::string& what) {
    size_t n = p.size();
    Matrix aug(n, std::vector<Rational>(2 * n, Rational(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            aug[i][j] = p[i][j];
        aug[i][n + i] = 1;
    }
    std::vector<int> pivots = reduced_row_echelon(aug);
    if (pivots.size() != n || (n > 0 && pivots.back() != static_cast<int>(n) - 1))
        throw PoincareDualityError(what);
    Matrix inv(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            inv[i][j] = aug[i][n + j];
    return inv;
}

}  // namespace

DualBasis poincare_dual_basis(const CohomologyTable& base_table, const ExpVec& fundamental,
                              int dimension, bool negate_orientation) {
    if (base_table.max_degree() < dimension)
        throw ConstructionError("base cohomology table stops below the dimension");
    if (base_table.dimension(dimension) != 1)
        throw PoincareDualityError("top cohomology has dimension " +
                                   std::to_string(base_table.dimension(dimension)) +
                                   ", expected a line");

    DualBasis db;
    db.base = base_table.algebra();
    db.dimension = dimension;

    Element omega = monomial_element(db.base, fundamental);
    Projection p = project_class(base_table, omega, dimension);
    Rational scale = p.coordinates[0];
    if (scale == 0)
        throw PoincareDualityError("fundamental monomial is a coboundary");
    if (negate_orientation) {
        omega = -omega;
        scale = -scale;
    }
    db.orientation = omega;
    db.top_scale = scale;

    for (int d = 0; d <= dimension; ++d) {
        for (const auto& cls : base_table.classes(d)) {
            db.classes.push_back(cls);
            db.euler_characteristic += d % 2 == 0 ? 1 : -1;
        }
    }
    db.duals.resize(db.classes.size());

    // Per complementary degree pair, invert the evaluation matrix of the
    // class products against the orientation.
    size_t offset = 0;
    for (int d = 0; d <= dimension; ++d) {
        const auto& block = base_table.classes(d);
        const auto& coblock = base_table.classes(dimension - d);
        if (block.size() != coblock.size())
            throw PoincareDualityError("cohomology in degrees " + std::to_string(d) + " and " +
                                       std::to_string(dimension - d) +
                                       " have different dimensions");
        size_t n = block.size();
        Matrix pairing(n, std::vector<Rational>(n, Rational(0)));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                Element prod = coblock[i].representative * block[j].representative;
                Projection q = project_class(base_table, prod, dimension);
                pairing[i][j] = q.coordinates[0] / scale;
            }
        }
        Matrix inv = inverse_or_throw(pairing, "intersection pairing degenerates in degree " +
                                                   std::to_string(d));
        for (size_t j = 0; j < n; ++j) {
            Element dual = Element::zero(db.base);
            for (size_t i = 0; i < n; ++i)
                if (inv[j][i] != 0)
                    dual += inv[j][i] * coblock[i].representative;
            db.duals[offset + j] = dual;
        }
        offset += n;
    }
    return db;
}

Rational evaluate_top(const DualBasis& db, const CohomologyTable& base_table, const Element& e) {
    Projection p = project_class(base_table, e, db.dimension);
    return p.coordinates[0] / db.top_scale;
}

Morphism lift_into(const AlgebraPtr& source, const AlgebraPtr& target,
                   const std::string& suffix) {
    Morphism f{source, target, {}};
    for (const auto& g : source->generators()) {
        std::string name = g.name + suffix;
        if (target->index_of(name) < 0)
            throw ConstructionError("no generator " + name + " in " + target->name());
        f.images[g.name] = generator_element(target, name);
    }
    return f;
}

namespace {

Element euler_sum(const DualBasis& db, const AlgebraPtr& target) {
    Morphism l1 = lift_into(db.base, target, "1");
    Morphism l2 = lift_into(db.base, target, "2");
    Element e = Element::zero(target);
    for (size_t k = 0; k < db.classes.size(); ++k) {
        Element term = apply(l1, db.duals[k]) * apply(l2, db.classes[k].representative);
        if (db.classes[k].degree % 2 != 0)
            term = -term;
        e += term;
    }
    return e;
}

}  // namespace

Element diagonal_euler_class(const DualBasis& db, const AlgebraPtr& base_square) {
    return euler_sum(db, base_square);
}

Element euler_class_delta_in(const DualBasis& db, const AlgebraPtr& mprime) {
    return euler_sum(db, mprime);
}

LinearMap shriek_map(const LoopModelBundle& bundle, const DualBasis& db) {
    AlgebraPtr fp = bundle.fiber_product;
    AlgebraPtr mp = bundle.mprime;
    AlgebraPtr base = db.base;
    Element euler = euler_class_delta_in(db, mp);
    Morphism l1 = lift_into(base, mp, "1");
    Morphism l2 = lift_into(base, mp, "2");

    LinearMap f;
    f.source = fp;
    f.target = mp;
    f.shift = bundle.dimension;
    f.action = [fp, mp, base, euler, l1, l2](const ExpVec& exps) -> Element {
        // Split off the base part of the monomial; the canonical generator
        // order puts it in front of the bars, so no sign is incurred.
        ExpVec base_part(static_cast<size_t>(base->generator_count()), 0);
        ExpVec bar_part(static_cast<size_t>(mp->generator_count()), 0);
        for (int i = 0; i < fp->generator_count(); ++i) {
            int e = exps[static_cast<size_t>(i)];
            if (e == 0)
                continue;
            const Generator& g = fp->generator(i);
            if (g.origin == Origin::base)
                base_part[static_cast<size_t>(base->index_of(g.name))] = e;
            else
                bar_part[static_cast<size_t>(mp->index_of(g.name))] = e;
        }
        Element a = monomial_element(base, base_part);
        Element sym = Rational(1, 2) * (apply(l1, a) + apply(l2, a));
        return sym * monomial_element(mp, bar_part) * euler;
    };
    return f;
}

ShriekReport verify_shriek_anticommutation(const LoopModelBundle& bundle,
                                           const LinearMap& shriek, int max_degree) {
    for (int n = 0; n <= max_degree; ++n) {
        for (const ExpVec& exps : bundle.fiber_product->monomial_basis(n)) {
            Element w = monomial_element(bundle.fiber_product, exps);
            Element lhs = differential(apply(shriek, w));
            Element rhs = apply(shriek, differential(w));
            if (bundle.dimension % 2 != 0)
                rhs = -rhs;
            if (lhs != rhs)
                return {false, n, exps};
        }
    }
    return {};
}

ShriekReport verify_shriek_euler_identity(const LoopModelBundle& bundle,
                                          const LinearMap& shriek, const Element& euler,
                                          int max_degree) {
    for (int n = 0; n <= max_degree; ++n) {
        for (const ExpVec& exps : bundle.mprime->monomial_basis(n)) {
            Element w = monomial_element(bundle.mprime, exps);
            Element lhs = apply(bundle.rho, apply(shriek, apply(bundle.delta_in, w)));
            Element rhs = apply(bundle.rho, w * euler);
            if (lhs != rhs)
                return {false, n, exps};
        }
    }
    return {};
}

Element coproduct_representative(const LoopModelBundle& bundle, const LinearMap& shriek,
                                 const Element& rep1, const Element& rep2) {
    Morphism l1 = lift_into(bundle.loop, bundle.loop_square, "1");
    Morphism l2 = lift_into(bundle.loop, bundle.loop_square, "2");
    Element w = apply(l1, rep1) * apply(l2, rep2);
    return apply(bundle.rho, apply(shriek, apply(bundle.delta_out, w)));
}

CoproductResult dual_loop_coproduct(const LoopModelBundle& bundle, const LinearMap& shriek,
                                    const CohomologyTable& loop_table,
                                    const CohomologyClass& c1, const CohomologyClass& c2) {
    CoproductResult out;
    out.degree = c1.degree + c2.degree + bundle.dimension;
    out.representative =
        coproduct_representative(bundle, shriek, c1.representative, c2.representative);
    Projection p = project_class(loop_table, out.representative, out.degree);
    out.coordinates = std::move(p.coordinates);
    return out;
}

HodgeDecomposition hodge_decomposition(const CohomologyTable& loop_table, int degree) {
    HodgeDecomposition out;
    out.degree = degree;
    std::map<int, std::vector<int>> by_length;
    const auto& classes = loop_table.classes(degree);
    for (size_t k = 0; k < classes.size(); ++k) {
        if (classes[k].word_length < 0)
            throw AlgebraError("class " + classes[k].label +
                               " mixes bar word lengths; no length decomposition exists");
        by_length[classes[k].word_length].push_back(static_cast<int>(k));
    }
    for (auto& [length, indices] : by_length)
        out.components.push_back({length, std::move(indices)});
    return out;
}

HodgeReport verify_hodge_additivity(const LoopModelBundle& bundle, const LinearMap& shriek,
                                    const CohomologyTable& loop_table, int max_pair_degree) {
    if (max_pair_degree + bundle.dimension > loop_table.max_degree())
        throw ConstructionError("pair degree bound exceeds the computed loop cohomology");
    for (int p = 0; p <= max_pair_degree; ++p) {
        for (int q = 0; q + p <= max_pair_degree; ++q) {
            for (const auto& c1 : loop_table.classes(p)) {
                for (const auto& c2 : loop_table.classes(q)) {
                    if (c1.word_length < 0 || c2.word_length < 0)
                        return {false, p, q, c1.label + " (x) " + c2.label};
                    CoproductResult r = dual_loop_coproduct(bundle, shriek, loop_table, c1, c2);
                    const auto& targets = loop_table.classes(r.degree);
                    for (size_t k = 0; k < r.coordinates.size(); ++k) {
                        if (r.coordinates[k] != 0 &&
                            targets[k].word_length != c1.word_length + c2.word_length)
                            return {false, p, q, c1.label + " (x) " + c2.label};
                    }
                }
            }
        }
    }
    return {};
}

}  // namespace loopspace
