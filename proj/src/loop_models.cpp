#include "loopspace/loop_models.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace loopspace {

namespace {

void check_model_names(const ModelDescription& desc) {
    for (const auto& [name, degree] : desc.generators) {
        if (degree < 2)
            throw ConstructionError("generator " + name + " has degree " +
                                    std::to_string(degree) +
                                    "; loop space models require a simply connected base");
        if (std::isdigit(static_cast<unsigned char>(name.back())))
            throw ConstructionError("generator name " + name +
                                    " ends in a digit and would collide with copy labels");
        for (const auto& [other, other_degree] : desc.generators)
            if (name == other + "bar")
                throw ConstructionError("generator name " + name +
                                        " collides with the suspension label of " + other);
    }
}

Poly retag_poly(const Poly& p, const std::string& suffix) {
    Poly out = p;
    for (auto& term : out)
        for (auto& factor : term.powers)
            factor.first += suffix;
    return out;
}

}  // namespace

AlgebraPtr build_base_algebra(const ModelDescription& desc, int cutoff) {
    check_model_names(desc);
    std::vector<Generator> gens;
    for (const auto& [name, degree] : desc.generators)
        gens.push_back({name, degree, Origin::base});
    AlgebraPtr probe = Algebra::create(desc.name, gens, desc.truncations, cutoff);

    std::set<std::string> dropped;
    for (const auto& [gname, poly] : desc.differentials) {
        if (desc.degree_of(gname) % 2 == 0 || poly.empty())
            continue;
        if (to_element(poly, probe).is_zero())
            dropped.insert(gname);
    }
    for (const auto& [gname, poly] : desc.differentials)
        for (const auto& term : poly)
            for (const auto& [n, e] : term.powers)
                if (n != gname && dropped.count(n))
                    throw ConstructionError("generator " + n +
                                            " is dropped by truncation but appears in the "
                                            "differential of " + gname);

    std::vector<Generator> kept;
    for (const auto& g : gens)
        if (!dropped.count(g.name))
            kept.push_back(g);
    if (kept.empty())
        throw ConstructionError("every generator of " + desc.name + " is dropped");

    auto base = Algebra::create(desc.name, kept, desc.truncations, cutoff);
    AlgebraPtr base_c = base;
    std::map<std::string, Element> d;
    for (const auto& [gname, poly] : desc.differentials)
        if (!dropped.count(gname))
            d[gname] = to_element(poly, base_c);
    base->set_differential(d);
    return base_c;
}

namespace {

struct BarSlot {
    Origin origin;
    std::string suffix;
};

// Shared construction for the loop and fiber product models: base tensor one
// suspended copy per slot, d(vbar_i) = -s_i(dv) evaluated in the untruncated
// companion and then reduced.
AlgebraPtr build_suspended(const ModelDescription& desc, const AlgebraPtr& base,
                           const std::vector<BarSlot>& slots, const std::string& algebra_name) {
    std::vector<Generator> free_gens;
    for (const auto& [name, degree] : desc.generators) {
        free_gens.push_back({name, degree, Origin::base});
        for (const auto& slot : slots)
            free_gens.push_back({name + "bar" + slot.suffix, degree - 1, slot.origin});
    }
    AlgebraPtr companion =
        Algebra::create(algebra_name + " companion", free_gens, {}, base->cutoff());

    std::vector<Generator> gens;
    std::map<std::string, int> truncations;
    for (int i = 0; i < base->generator_count(); ++i) {
        gens.push_back(base->generator(i));
        if (base->truncation(i) > 0)
            truncations[base->generator(i).name] = base->truncation(i);
    }
    for (const auto& [name, degree] : desc.generators)
        for (const auto& slot : slots)
            gens.push_back({name + "bar" + slot.suffix, degree - 1, slot.origin});
    auto algebra = Algebra::create(algebra_name, gens, truncations, base->cutoff());
    AlgebraPtr alg = algebra;

    // Base generators dropped by truncation reduce to zero; everything else
    // passes through by name.
    Morphism reduce{companion, alg, {}};
    for (const auto& g : companion->generators())
        reduce.images[g.name] = alg->index_of(g.name) >= 0 ? generator_element(alg, g.name)
                                                           : Element::zero(alg);

    std::map<std::string, Element> d;
    for (int i = 0; i < base->generator_count(); ++i) {
        const std::string& n = base->generator(i).name;
        auto it = desc.differentials.find(n);
        if (it != desc.differentials.end())
            d[n] = to_element(it->second, alg);
    }
    for (const auto& slot : slots) {
        DerivationSpec s{-1, {}};
        for (const auto& [name, degree] : desc.generators)
            s.values[name] = generator_element(companion, name + "bar" + slot.suffix);
        for (const auto& [name, degree] : desc.generators) {
            auto it = desc.differentials.find(name);
            if (it == desc.differentials.end())
                continue;
            Element dv = to_element(it->second, companion);
            d[name + "bar" + slot.suffix] = apply(reduce, -apply_derivation(s, dv));
        }
    }
    algebra->set_differential(d);
    return alg;
}

}  // namespace

AlgebraPtr build_loop_model(const ModelDescription& desc, const AlgebraPtr& base) {
    return build_suspended(desc, base, {{Origin::bar1, ""}}, desc.name + " loop");
}

AlgebraPtr build_fiber_product_model(const ModelDescription& desc, const AlgebraPtr& base) {
    return build_suspended(desc, base, {{Origin::bar1, "1"}, {Origin::bar2, "2"}},
                           desc.name + " fiber");
}

Element exponential_series(const DerivationSpec& s, const DerivationSpec& d,
                           const Element& seed, int cap) {
    Element total = Element::zero(seed.algebra());
    Element term = seed;
    Rational coeff(1);  // (-1)^k / k!
    int k = 0;
    while (!term.is_zero()) {
        if (k > cap)
            throw SeriesDivergenceError("exponential series still alive after " +
                                        std::to_string(cap) + " iterations");
        total += coeff * term;
        ++k;
        coeff = -coeff / k;
        term = apply_derivation(s, apply_derivation(d, term));
    }
    return total;
}

AlgebraPtr build_mprime_model(const ModelDescription& desc, const AlgebraPtr& base) {
    std::vector<Generator> free_gens;
    for (const auto& [name, degree] : desc.generators) {
        free_gens.push_back({name + "1", degree, Origin::copy1});
        free_gens.push_back({name + "2", degree, Origin::copy2});
        free_gens.push_back({name + "bar1", degree - 1, Origin::bar1});
        free_gens.push_back({name + "bar2", degree - 1, Origin::bar2});
    }
    AlgebraPtr companion =
        Algebra::create(desc.name + " mprime companion", free_gens, {}, base->cutoff());

    DerivationSpec dprime{+1, {}};
    for (const auto& [name, degree] : desc.generators) {
        auto it = desc.differentials.find(name);
        Poly p = it == desc.differentials.end() ? Poly{} : it->second;
        dprime.values[name + "1"] = to_element(retag_poly(p, "1"), companion);
        dprime.values[name + "2"] = to_element(retag_poly(p, "2"), companion);
    }

    DerivationSpec s1{-1, {}}, s2{-1, {}};
    for (const auto& [name, degree] : desc.generators) {
        s1.values[name + "1"] = generator_element(companion, name + "bar1");
        s1.values[name + "2"] = generator_element(companion, name + "bar1");
        s2.values[name + "1"] = generator_element(companion, name + "bar2");
        s2.values[name + "2"] = generator_element(companion, name + "bar2");
        // The suspension squares to zero, so bars are annihilated.
        for (const char* bar : {"bar1", "bar2"}) {
            s1.values[name + bar] = Element::zero(companion);
            s2.values[name + bar] = Element::zero(companion);
        }
    }

    // Bars of lower-degree generators appear inside the series of higher
    // ones through dprime, so the induction runs by increasing degree.
    std::vector<std::pair<std::string, int>> order = desc.generators;
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    for (const auto& [name, degree] : order) {
        for (int i = 1; i <= 2; ++i) {
            std::string copy = name + std::to_string(i);
            std::string other = name + std::to_string(3 - i);
            Element series = exponential_series(i == 1 ? s1 : s2, dprime,
                                                generator_element(companion, copy), degree + 1);
            dprime.values[name + "bar" + std::to_string(i)] =
                series - generator_element(companion, other);
        }
    }

    std::vector<Generator> gens;
    std::map<std::string, int> truncations;
    for (int i = 0; i < base->generator_count(); ++i) {
        const Generator& g = base->generator(i);
        gens.push_back({g.name + "1", g.degree, Origin::copy1});
        gens.push_back({g.name + "2", g.degree, Origin::copy2});
        if (base->truncation(i) > 0) {
            truncations[g.name + "1"] = base->truncation(i);
            truncations[g.name + "2"] = base->truncation(i);
        }
    }
    for (const auto& [name, degree] : desc.generators) {
        gens.push_back({name + "bar1", degree - 1, Origin::bar1});
        gens.push_back({name + "bar2", degree - 1, Origin::bar2});
    }
    auto algebra = Algebra::create(desc.name + " mprime", gens, truncations, base->cutoff());
    AlgebraPtr alg = algebra;

    Morphism reduce{companion, alg, {}};
    for (const auto& g : companion->generators())
        reduce.images[g.name] = alg->index_of(g.name) >= 0 ? generator_element(alg, g.name)
                                                           : Element::zero(alg);

    std::map<std::string, Element> d;
    for (const auto& g : alg->generators())
        d[g.name] = apply(reduce, dprime.values.at(g.name));
    algebra->set_differential(d);
    return alg;
}

Morphism merge_copies(const AlgebraPtr& source, const AlgebraPtr& target, bool merge_bars) {
    Morphism f{source, target, {}};
    for (const auto& g : source->generators()) {
        std::string name = g.name;
        bool is_copy = g.origin == Origin::copy1 || g.origin == Origin::copy2;
        if (is_copy || (merge_bars && is_bar(g.origin)))
            name.pop_back();  // copy labels end in their digit; declared names never do
        if (target->index_of(name) < 0)
            throw ConstructionError("no generator " + name + " in " + target->name() +
                                    " to receive " + g.name);
        f.images[g.name] = generator_element(target, name);
    }
    return f;
}

LoopModelBundle build_loop_bundle(const ModelDescription& desc, int cutoff) {
    LoopModelBundle b;
    b.description = desc;
    b.dimension = desc.dimension;
    b.cutoff = cutoff;
    b.base = build_base_algebra(desc, cutoff);
    b.loop = build_loop_model(desc, b.base);
    b.loop_square = tensor(b.loop, b.loop);
    b.fiber_product = build_fiber_product_model(desc, b.base);
    b.mprime = build_mprime_model(desc, b.base);
    b.delta_out = merge_copies(b.loop_square, b.fiber_product, false);
    b.delta_in = merge_copies(b.mprime, b.fiber_product, false);
    b.rho = merge_copies(b.mprime, b.loop, true);

    b.fundamental.assign(static_cast<size_t>(b.base->generator_count()), 0);
    for (const auto& [name, exp] : desc.fundamental) {
        int i = b.base->index_of(name);
        if (i < 0)
            throw ConstructionError("fundamental monomial names dropped generator " + name);
        b.fundamental[static_cast<size_t>(i)] += exp;
    }
    if (monomial_element(b.base, b.fundamental).is_zero())
        throw ConstructionError("fundamental monomial of " + desc.name +
                                " vanishes under the declared relations");
    return b;
}

namespace {

WordLengthReport check_word_lengths(const AlgebraPtr& algebra, int max_degree, bool strict) {
    for (int n = 0; n <= max_degree; ++n) {
        for (const ExpVec& exps : algebra->monomial_basis(n)) {
            int w = algebra->bar_word_length(exps);
            Element image = differential(monomial_element(algebra, exps));
            for (const auto& [t, c] : image.terms()) {
                int wt = algebra->bar_word_length(t);
                if (strict ? wt != w : wt > w)
                    return {false, n, exps};
            }
        }
    }
    return {};
}

}  // namespace

WordLengthReport verify_word_length_preserved(const AlgebraPtr& algebra, int max_degree) {
    return check_word_lengths(algebra, max_degree, true);
}

WordLengthReport verify_word_length_nonincreasing(const AlgebraPtr& algebra, int max_degree) {
    return check_word_lengths(algebra, max_degree, false);
}

WordLengthReport verify_word_length_preserved(const Morphism& f, int max_degree) {
    for (int n = 0; n <= max_degree; ++n) {
        for (const ExpVec& exps : f.source->monomial_basis(n)) {
            int w = f.source->bar_word_length(exps);
            Element image = apply(f, monomial_element(f.source, exps));
            for (const auto& [t, c] : image.terms())
                if (f.target->bar_word_length(t) != w)
                    return {false, n, exps};
        }
    }
    return {};
}

}  // namespace loopspace
