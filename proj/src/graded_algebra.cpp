#include "loopspace/graded_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace loopspace {

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

bool is_bar(Origin o) { return o == Origin::bar1 || o == Origin::bar2; }

bool generator_less(const Generator& a, const Generator& b) {
    if (a.origin != b.origin)
        return a.origin < b.origin;
    if (a.degree != b.degree)
        return a.degree < b.degree;
    return a.name < b.name;
}

// ---------------------------------------------------------------- Element

Element Element::zero(AlgebraPtr algebra) {
    Element e;
    e.algebra_ = std::move(algebra);
    return e;
}

void Element::add_term(const ExpVec& exps, const Rational& coeff) {
    if (coeff == 0)
        return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(exps, coeff);
        return;
    }
    it->second += coeff;
    if (it->second == 0)
        terms_.erase(it);
}

std::vector<Monomial> Element::monomials() const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& [exps, coeff] : terms_)
        out.push_back({exps, coeff});
    return out;
}

bool Element::is_homogeneous() const {
    if (terms_.empty())
        return true;
    int d = algebra_->degree_of(terms_.begin()->first);
    for (const auto& [exps, coeff] : terms_)
        if (algebra_->degree_of(exps) != d)
            return false;
    return true;
}

int Element::degree() const {
    if (terms_.empty())
        return 0;
    if (!is_homogeneous())
        throw AlgebraError("degree of an inhomogeneous element");
    return algebra_->degree_of(terms_.begin()->first);
}

Element Element::homogeneous_part(int n) const {
    Element out;
    out.algebra_ = algebra_;
    for (const auto& [exps, coeff] : terms_)
        if (algebra_->degree_of(exps) == n)
            out.terms_.emplace(exps, coeff);
    return out;
}

namespace {

// Throws unless the two elements may combine; returns the algebra the result
// lives in (null only when both operands are null zeros).
AlgebraPtr join_algebras(const Element& a, const Element& b) {
    if (a.algebra() && b.algebra() && a.algebra() != b.algebra())
        throw DomainMismatchError("operands belong to different algebras");
    return a.algebra() ? a.algebra() : b.algebra();
}

// Sign of concatenating canonical monomials a and b into canonical order:
// (-1)^{sum over odd-generator pairs i > j of a_i b_j}.
int koszul_sign(const Algebra& alg, const ExpVec& a, const ExpVec& b) {
    int parity = 0;
    for (int i = 0; i < alg.generator_count(); ++i) {
        if (a[static_cast<size_t>(i)] == 0 || !alg.generator(i).is_odd())
            continue;
        for (int j = 0; j < i; ++j) {
            if (b[static_cast<size_t>(j)] == 0 || !alg.generator(j).is_odd())
                continue;
            parity += a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
        }
    }
    return parity % 2 == 0 ? 1 : -1;
}

// Combined exponents, or false when an odd square or a truncation kills the
// product.
bool combine_exponents(const Algebra& alg, const ExpVec& a, const ExpVec& b, ExpVec& out) {
    out.resize(a.size());
    for (int i = 0; i < alg.generator_count(); ++i) {
        const auto k = static_cast<size_t>(i);
        int e = a[k] + b[k];
        if (alg.generator(i).is_odd() && e > 1)
            return false;
        int bound = alg.truncation(i);
        if (bound > 0 && e >= bound)
            return false;
        out[k] = e;
    }
    return true;
}

}  // namespace

Element Element::operator-() const {
    Element out;
    out.algebra_ = algebra_;
    for (const auto& [exps, coeff] : terms_)
        out.terms_.emplace(exps, -coeff);
    return out;
}

Element& Element::operator+=(const Element& rhs) {
    algebra_ = join_algebras(*this, rhs);
    for (const auto& [exps, coeff] : rhs.terms_)
        add_term(exps, coeff);
    return *this;
}

Element& Element::operator-=(const Element& rhs) {
    algebra_ = join_algebras(*this, rhs);
    for (const auto& [exps, coeff] : rhs.terms_)
        add_term(exps, -coeff);
    return *this;
}

Element operator*(const Element& lhs, const Element& rhs) {
    AlgebraPtr alg = join_algebras(lhs, rhs);
    Element out;
    out.algebra_ = alg;
    if (lhs.is_zero() || rhs.is_zero())
        return out;
    ExpVec combined;
    for (const auto& [ae, ac] : lhs.terms_) {
        for (const auto& [be, bc] : rhs.terms_) {
            if (!combine_exponents(*alg, ae, be, combined))
                continue;
            Rational c = ac * bc;
            if (koszul_sign(*alg, ae, be) < 0)
                c = -c;
            out.add_term(combined, c);
        }
    }
    return out;
}

Element operator*(const Rational& c, const Element& e) {
    Element out;
    out.algebra_ = e.algebra_;
    if (c == 0)
        return out;
    for (const auto& [exps, coeff] : e.terms_)
        out.terms_.emplace(exps, c * coeff);
    return out;
}

bool Element::operator==(const Element& rhs) const {
    if (is_zero() && rhs.is_zero())
        return true;
    if (algebra_ && rhs.algebra_ && algebra_ != rhs.algebra_)
        return false;
    return terms_ == rhs.terms_;
}

std::string Element::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [exps, coeff] : terms_) {
        Rational c = coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0)
                c = -c;
        }
        first = false;
        std::string label = algebra_->monomial_label(exps);
        if (label == "1") {
            os << to_string(c);
        } else {
            if (c != 1)
                os << to_string(c) << "*";
            os << label;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- Algebra

std::shared_ptr<Algebra> Algebra::create(std::string name, std::vector<Generator> generators,
                                         std::map<std::string, int> truncations, int cutoff) {
    if (cutoff < 0)
        throw ConstructionError("cutoff must be nonnegative");
    std::sort(generators.begin(), generators.end(), generator_less);
    auto alg = std::shared_ptr<Algebra>(new Algebra());
    alg->name_ = std::move(name);
    alg->cutoff_ = cutoff;
    for (const auto& g : generators) {
        if (g.degree < 1)
            throw ConstructionError("generator " + g.name + " has degree < 1");
        if (alg->index_.count(g.name))
            throw ConstructionError("duplicate generator name " + g.name);
        alg->index_.emplace(g.name, static_cast<int>(alg->generators_.size()));
        alg->generators_.push_back(g);
    }
    alg->truncations_.assign(alg->generators_.size(), 0);
    for (const auto& [gname, bound] : truncations) {
        int i = alg->index_of(gname);
        if (i < 0)
            throw ConstructionError("truncation names unknown generator " + gname);
        if (alg->generator(i).is_odd())
            throw ConstructionError("truncation on odd generator " + gname);
        if (bound < 2)
            throw ConstructionError("truncation bound for " + gname + " must be >= 2");
        alg->truncations_[static_cast<size_t>(i)] = bound;
    }
    alg->differential_.assign(alg->generators_.size(), Element());
    return alg;
}

void Algebra::set_differential(const std::map<std::string, Element>& values) {
    if (has_differential_)
        throw ConstructionError("differential of " + name_ + " is already set");
    for (const auto& [gname, value] : values) {
        int i = index_of(gname);
        if (i < 0)
            throw ConstructionError("differential names unknown generator " + gname);
        if (value.is_zero())
            continue;
        if (value.algebra().get() != this)
            throw DomainMismatchError("differential of " + gname + " lives in another algebra");
        if (!value.is_homogeneous() || value.degree() != generator(i).degree + 1)
            throw ConstructionError("differential of " + gname +
                                    " is not homogeneous of degree +1");
        differential_[static_cast<size_t>(i)] = value;
    }
    has_differential_ = true;
}

int Algebra::index_of(const std::string& generator_name) const {
    auto it = index_.find(generator_name);
    return it == index_.end() ? -1 : it->second;
}

bool Algebra::is_finite_dimensional() const {
    for (int i = 0; i < generator_count(); ++i)
        if (!generator(i).is_odd() && truncation(i) == 0)
            return false;
    return true;
}

int Algebra::degree_of(const ExpVec& exps) const {
    int d = 0;
    for (int i = 0; i < generator_count(); ++i)
        d += exps[static_cast<size_t>(i)] * generator(i).degree;
    return d;
}

int Algebra::bar_word_length(const ExpVec& exps) const {
    int w = 0;
    for (int i = 0; i < generator_count(); ++i)
        if (is_bar(generator(i).origin))
            w += exps[static_cast<size_t>(i)];
    return w;
}

const Element& Algebra::differential_of(int i) const {
    if (!has_differential_)
        throw ConstructionError("algebra " + name_ + " has no differential");
    return differential_[static_cast<size_t>(i)];
}

const std::vector<ExpVec>& Algebra::monomial_basis(int n) const {
    if (n > cutoff_)
        throw CutoffExceededError("monomial basis of " + name_ + " requested at degree " +
                                  std::to_string(n) + " beyond cutoff " + std::to_string(cutoff_));
    std::lock_guard<std::mutex> lock(basis_mutex_);
    auto it = basis_cache_.find(n);
    if (it != basis_cache_.end())
        return it->second;

    std::vector<ExpVec> result;
    if (n >= 0) {
        ExpVec exps(generators_.size(), 0);
        // Enumerate exponents of generator i and recurse on the remaining
        // degree; iteration order yields ascending lexicographic output.
        std::function<void(int, int)> walk = [&](int i, int remaining) {
            if (remaining == 0) {
                result.push_back(exps);
                return;
            }
            if (i >= generator_count())
                return;
            const Generator& g = generator(i);
            int max_e = remaining / g.degree;
            if (g.is_odd())
                max_e = std::min(max_e, 1);
            int bound = truncation(i);
            if (bound > 0)
                max_e = std::min(max_e, bound - 1);
            for (int e = 0; e <= max_e; ++e) {
                exps[static_cast<size_t>(i)] = e;
                walk(i + 1, remaining - e * g.degree);
            }
            exps[static_cast<size_t>(i)] = 0;
        };
        walk(0, n);
        std::sort(result.begin(), result.end());
    }
    return basis_cache_.emplace(n, std::move(result)).first->second;
}

std::string Algebra::monomial_label(const ExpVec& exps) const {
    std::string out;
    for (int i = 0; i < generator_count(); ++i) {
        int e = exps[static_cast<size_t>(i)];
        if (e == 0)
            continue;
        if (!out.empty())
            out += "*";
        out += generator(i).name;
        if (e > 1)
            out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------- builders

Element unit(const AlgebraPtr& algebra) {
    return monomial_element(algebra, ExpVec(static_cast<size_t>(algebra->generator_count()), 0));
}

Element generator_element(const AlgebraPtr& algebra, const std::string& name) {
    int i = algebra->index_of(name);
    if (i < 0)
        throw ConstructionError("unknown generator " + name + " in " + algebra->name());
    ExpVec exps(static_cast<size_t>(algebra->generator_count()), 0);
    exps[static_cast<size_t>(i)] = 1;
    return monomial_element(algebra, exps);
}

Element monomial_element(const AlgebraPtr& algebra, const ExpVec& exps, const Rational& coeff) {
    if (exps.size() != static_cast<size_t>(algebra->generator_count()))
        throw ConstructionError("exponent vector length mismatch in " + algebra->name());
    Element e;
    e.algebra_ = algebra;
    if (coeff == 0)
        return e;
    for (int i = 0; i < algebra->generator_count(); ++i) {
        int exp = exps[static_cast<size_t>(i)];
        if (exp < 0)
            throw ConstructionError("negative exponent in " + algebra->name());
        if (algebra->generator(i).is_odd() && exp > 1)
            return e;
        int bound = algebra->truncation(i);
        if (bound > 0 && exp >= bound)
            return e;
    }
    e.terms_.emplace(exps, coeff);
    return e;
}

Element power(const Element& base, int k) {
    if (k < 0)
        throw AlgebraError("negative power");
    Element out = unit(base.algebra());
    for (int i = 0; i < k; ++i)
        out = out * base;
    return out;
}

// ------------------------------------------------------------ derivations

namespace {

// Shared Leibniz walk: values[i] is the derivation's value on generator i
// (null Element when undefined), shift its degree.
Element leibniz_apply(int shift, const std::vector<const Element*>& values, const Element& e,
                      const char* what) {
    const AlgebraPtr& alg = e.algebra();
    Element out = Element::zero(alg);
    for (const auto& [exps, coeff] : e.terms()) {
        int prefix_degree = 0;
        for (int i = 0; i < alg->generator_count(); ++i) {
            const auto k = static_cast<size_t>(i);
            int exp = exps[k];
            if (exp == 0)
                continue;
            const Generator& g = alg->generator(i);
            const Element* value = values[k];
            if (value == nullptr)
                throw IncompleteDerivationError(std::string(what) + " has no value on generator " +
                                                g.name);
            if (!value->is_zero()) {
                // theta hits the g_i block: prefix * (exp * g_i^{exp-1} *
                // theta(g_i)) * suffix, with the Koszul sign of carrying a
                // degree-`shift` operator past the prefix.
                ExpVec prefix(exps.size(), 0), suffix(exps.size(), 0);
                for (int j = 0; j < alg->generator_count(); ++j) {
                    const auto kj = static_cast<size_t>(j);
                    if (j < i)
                        prefix[kj] = exps[kj];
                    else if (j > i)
                        suffix[kj] = exps[kj];
                }
                prefix[k] = exp - 1;
                Rational c = coeff * exp;
                if ((shift * prefix_degree) % 2 != 0)
                    c = -c;
                out += monomial_element(alg, prefix, c) * (*value) * monomial_element(alg, suffix);
            }
            prefix_degree += exp * g.degree;
        }
    }
    return out;
}

}  // namespace

Element differential(const Element& e) {
    if (!e.algebra())
        return e;
    const AlgebraPtr& alg = e.algebra();
    std::vector<const Element*> values(static_cast<size_t>(alg->generator_count()));
    for (int i = 0; i < alg->generator_count(); ++i)
        values[static_cast<size_t>(i)] = &alg->differential_of(i);
    return leibniz_apply(1, values, e, "differential");
}

Element apply_derivation(const DerivationSpec& spec, const Element& e) {
    if (!e.algebra())
        return e;
    const AlgebraPtr& alg = e.algebra();
    std::vector<const Element*> values(static_cast<size_t>(alg->generator_count()), nullptr);
    for (const auto& [gname, value] : spec.values) {
        int i = alg->index_of(gname);
        if (i < 0)
            throw ConstructionError("derivation names unknown generator " + gname);
        if (!value.is_zero() && value.algebra() != alg)
            throw DomainMismatchError("derivation value for " + gname + " lives elsewhere");
        values[static_cast<size_t>(i)] = &value;
    }
    return leibniz_apply(spec.shift, values, e, "derivation");
}

// ----------------------------------------------------------------- tensor

AlgebraPtr tensor(const AlgebraPtr& a, const AlgebraPtr& b) {
    auto retag = [](const Generator& g, bool second) -> Generator {
        Generator out = g;
        switch (g.origin) {
            case Origin::base:
                out.origin = second ? Origin::copy2 : Origin::copy1;
                break;
            case Origin::bar1:
                out.origin = second ? Origin::bar2 : Origin::bar1;
                break;
            default:
                throw ConstructionError("tensor factor already contains copy or bar2 generators");
        }
        out.name += second ? "2" : "1";
        return out;
    };

    std::vector<Generator> gens;
    std::map<std::string, int> truncations;
    std::vector<std::pair<AlgebraPtr, bool>> factors = {{a, false}, {b, true}};
    for (const auto& [factor, second] : factors) {
        for (int i = 0; i < factor->generator_count(); ++i) {
            Generator g = retag(factor->generator(i), second);
            gens.push_back(g);
            if (factor->truncation(i) > 0)
                truncations[g.name] = factor->truncation(i);
        }
    }
    auto product = Algebra::create(a->name() + " (x) " + b->name(), std::move(gens),
                                   std::move(truncations), std::min(a->cutoff(), b->cutoff()));

    // Substitution morphisms lift each factor's differential; the tensor
    // sign d(a ox b) = da ox b + (-1)^{|a|} a ox db then falls out of the
    // Leibniz rule on the product algebra.
    std::map<std::string, Element> d_values;
    AlgebraPtr product_c = product;
    for (const auto& [factor, second] : factors) {
        if (!factor->has_differential())
            continue;
        Morphism lift{factor, product_c, {}};
        for (int i = 0; i < factor->generator_count(); ++i)
            lift.images[factor->generator(i).name] =
                generator_element(product_c, retag(factor->generator(i), second).name);
        for (int i = 0; i < factor->generator_count(); ++i) {
            const Element& dg = factor->differential_of(i);
            if (!dg.is_zero())
                d_values[retag(factor->generator(i), second).name] = apply(lift, dg);
        }
    }
    if (a->has_differential() || b->has_differential())
        product->set_differential(d_values);
    return product;
}

// ------------------------------------------------------------- validation

DSquaredReport validate_d_squared(const AlgebraPtr& a, int N) {
    DSquaredReport report;
    for (int n = 0; n <= N; ++n) {
        for (const ExpVec& exps : a->monomial_basis(n)) {
            Element dd = differential(differential(monomial_element(a, exps)));
            if (!dd.is_zero()) {
                report.pass = false;
                report.witness_degree = n;
                report.witness = exps;
                report.witness_value = dd;
                return report;
            }
        }
    }
    return report;
}

// -------------------------------------------------------------- morphisms

Element apply(const Morphism& f, const Element& e) {
    if (!e.algebra())
        return e;
    if (e.algebra() != f.source)
        throw DomainMismatchError("morphism applied outside its source algebra");
    std::vector<const Element*> images(static_cast<size_t>(f.source->generator_count()), nullptr);
    for (int i = 0; i < f.source->generator_count(); ++i) {
        auto it = f.images.find(f.source->generator(i).name);
        if (it != f.images.end())
            images[static_cast<size_t>(i)] = &it->second;
    }
    Element out = Element::zero(f.target);
    for (const auto& [exps, coeff] : e.terms()) {
        Element term = coeff * unit(f.target);
        for (int i = 0; i < f.source->generator_count(); ++i) {
            int exp = exps[static_cast<size_t>(i)];
            if (exp == 0)
                continue;
            const Element* image = images[static_cast<size_t>(i)];
            if (image == nullptr)
                throw ConstructionError("morphism has no image for generator " +
                                        f.source->generator(i).name);
            if (image->is_zero()) {
                term = Element::zero(f.target);
                break;
            }
            term = term * power(*image, exp);
            if (term.is_zero())
                break;
        }
        out += term;
    }
    return out;
}

Morphism compose(const Morphism& outer, const Morphism& inner) {
    if (inner.target != outer.source)
        throw DomainMismatchError("composing morphisms with mismatched middle algebra");
    Morphism out{inner.source, outer.target, {}};
    for (const auto& [gname, image] : inner.images)
        out.images[gname] = apply(outer, image);
    return out;
}

ChainMapReport verify_chain_map(const Morphism& f, int N) {
    ChainMapReport report;
    for (int n = 0; n <= N; ++n) {
        for (const ExpVec& exps : f.source->monomial_basis(n)) {
            Element m = monomial_element(f.source, exps);
            if (apply(f, differential(m)) != differential(apply(f, m))) {
                report.pass = false;
                report.witness_degree = n;
                report.witness = exps;
                return report;
            }
        }
    }
    return report;
}

Element apply(const LinearMap& f, const Element& e) {
    if (!e.algebra())
        return e;
    if (e.algebra() != f.source)
        throw DomainMismatchError("linear map applied outside its source algebra");
    Element out = Element::zero(f.target);
    for (const auto& [exps, coeff] : e.terms())
        out += coeff * f.action(exps);
    return out;
}

}  // namespace loopspace
