#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "loopspace/errors.hpp"

namespace loopspace {

/// Exact arbitrary-precision rational. All coefficient arithmetic in the
/// engine is carried out in this type; there is no floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;

/// "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational& r);

/// Which tensor factor or suspension a generator belongs to. The enum order
/// is the canonical sort order of generator families.
enum class Origin { base = 0, bar1, bar2, copy1, copy2 };

bool is_bar(Origin o);

/// A named generator of a free graded-commutative algebra. Odd-degree
/// generators are exterior (square to zero); even-degree generators are
/// polynomial unless truncated by the ambient algebra.
struct Generator {
    std::string name;
    int degree = 0;
    Origin origin = Origin::base;

    bool is_odd() const { return degree % 2 != 0; }
};

/// Canonical generator order: (origin, degree, name).
bool generator_less(const Generator& a, const Generator& b);

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Exponent vector indexed by the algebra's canonical generator order.
using ExpVec = std::vector<int>;

struct Monomial {
    ExpVec exponents;
    Rational coefficient;
};

/// A polynomial: finitely many canonical monomials with distinct exponent
/// vectors and nonzero rational coefficients. A default-constructed Element
/// is the zero of no particular algebra and combines with anything.
class Element {
  public:
    Element() = default;
    static Element zero(AlgebraPtr algebra);

    const AlgebraPtr& algebra() const { return algebra_; }
    bool is_zero() const { return terms_.empty(); }

    /// Terms keyed by exponent vector, in canonical (lexicographic) order.
    const std::map<ExpVec, Rational>& terms() const { return terms_; }
    std::vector<Monomial> monomials() const;

    bool is_homogeneous() const;
    /// Degree of a homogeneous nonzero element; throws on mixed degrees,
    /// returns 0 for zero.
    int degree() const;
    Element homogeneous_part(int n) const;

    Element operator-() const;
    Element& operator+=(const Element& rhs);
    Element& operator-=(const Element& rhs);
    friend Element operator+(Element lhs, const Element& rhs) { return lhs += rhs; }
    friend Element operator-(Element lhs, const Element& rhs) { return lhs -= rhs; }
    friend Element operator*(const Element& lhs, const Element& rhs);
    friend Element operator*(const Rational& c, const Element& e);
    friend Element operator*(const Element& e, const Rational& c) { return c * e; }
    bool operator==(const Element& rhs) const;
    bool operator!=(const Element& rhs) const { return !(*this == rhs); }

    std::string str() const;

  private:
    friend class Algebra;
    friend Element monomial_element(const AlgebraPtr&, const ExpVec&, const Rational&);

    AlgebraPtr algebra_;
    std::map<ExpVec, Rational> terms_;

    void add_term(const ExpVec& exps, const Rational& coeff);
};

/// A free graded-commutative algebra on finitely many generators, optionally
/// quotiented by power truncations g^k = 0 on even generators, with an
/// optional degree +1 differential given on generators.
///
/// Immutable after set_differential (or after creation when no differential
/// is attached). Instances are shared through AlgebraPtr; two Elements
/// interoperate only when they hold the same instance.
class Algebra : public std::enable_shared_from_this<Algebra> {
  public:
    /// Creates an algebra with no differential. `truncations` maps generator
    /// name to the bound k of the relation g^k = 0; bounds require k >= 2 and
    /// even generators. `cutoff` is the mandatory validated degree range for
    /// enumeration and cohomology.
    static std::shared_ptr<Algebra> create(std::string name,
                                           std::vector<Generator> generators,
                                           std::map<std::string, int> truncations,
                                           int cutoff);

    /// Attaches the differential, given per generator (missing names mean
    /// zero). Callable once; every value must be homogeneous of degree
    /// generator degree + 1 and live in this algebra.
    void set_differential(const std::map<std::string, Element>& values);
    bool has_differential() const { return has_differential_; }

    const std::string& name() const { return name_; }
    int cutoff() const { return cutoff_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }
    const std::vector<Generator>& generators() const { return generators_; }
    const Generator& generator(int i) const { return generators_[static_cast<size_t>(i)]; }
    /// Index in canonical order, -1 when absent.
    int index_of(const std::string& generator_name) const;
    /// Truncation bound of generator i, 0 when untruncated.
    int truncation(int i) const { return truncations_[static_cast<size_t>(i)]; }
    /// True when every even generator is truncated, so the monomial basis is
    /// finite in total.
    bool is_finite_dimensional() const;

    int degree_of(const ExpVec& exps) const;
    /// Total word length in bar-origin generators.
    int bar_word_length(const ExpVec& exps) const;
    const Element& differential_of(int i) const;

    /// Complete, duplicate-free, lexicographically ordered list of degree-n
    /// exponent vectors respecting truncations. Throws CutoffExceededError
    /// for n > cutoff.
    const std::vector<ExpVec>& monomial_basis(int n) const;

    /// "1" or "*"-joined powers, e.g. "x^2*ybar".
    std::string monomial_label(const ExpVec& exps) const;

  private:
    Algebra() = default;

    std::string name_;
    std::vector<Generator> generators_;
    std::vector<int> truncations_;
    std::map<std::string, int> index_;
    int cutoff_ = 0;
    bool has_differential_ = false;
    std::vector<Element> differential_;

    mutable std::mutex basis_mutex_;
    mutable std::map<int, std::vector<ExpVec>> basis_cache_;
};

Element unit(const AlgebraPtr& algebra);
Element generator_element(const AlgebraPtr& algebra, const std::string& name);
/// Canonicalizes: the result is zero when the exponents violate an odd-square
/// or truncation relation.
Element monomial_element(const AlgebraPtr& algebra, const ExpVec& exps,
                         const Rational& coeff = Rational(1));
Element power(const Element& base, int k);

/// The Leibniz extension of the algebra's generator differentials.
/// Exact at every degree; degree gates apply to enumeration and cohomology,
/// not to arithmetic.
Element differential(const Element& e);

/// A degree-`shift` derivation given by its values on generators (missing
/// names are an error when they occur in an argument, not silently zero).
struct DerivationSpec {
    int shift = 0;
    std::map<std::string, Element> values;
};

/// The unique Leibniz extension of `spec` evaluated at `e`:
/// theta(uv) = theta(u) v + (-1)^{shift |u|} u theta(v).
Element apply_derivation(const DerivationSpec& spec, const Element& e);

/// Tensor product with systematic renaming: the first factor's generators
/// get suffix "1" (base -> copy1, bar1 stays bar1), the second factor's get
/// suffix "2" (base -> copy2, bar1 -> bar2). Factors already containing
/// copy or bar2 generators are rejected. The differential carries over with
/// the Koszul convention d(a ox b) = da ox b + (-1)^{|a|} a ox db.
AlgebraPtr tensor(const AlgebraPtr& a, const AlgebraPtr& b);

struct DSquaredReport {
    bool pass = true;
    int witness_degree = -1;
    ExpVec witness;       // first monomial with d(d(m)) != 0
    Element witness_value;
};

/// Checks d(d(m)) = 0 for every monomial of degree <= N.
DSquaredReport validate_d_squared(const AlgebraPtr& a, int N);

/// An algebra map given on generators. Images must preserve degree; the
/// chain-map property is established separately by verify_chain_map.
struct Morphism {
    AlgebraPtr source;
    AlgebraPtr target;
    std::map<std::string, Element> images;
};

Element apply(const Morphism& f, const Element& e);
Morphism compose(const Morphism& outer, const Morphism& inner);

struct ChainMapReport {
    bool pass = true;
    int witness_degree = -1;
    ExpVec witness;       // first monomial with f(dm) != d(f m)
};

/// Checks f(d m) = d(f m) on every source monomial of degree <= N.
ChainMapReport verify_chain_map(const Morphism& f, int N);

/// A plain degree-shifting linear map given monomial-by-monomial; not
/// multiplicative.
struct LinearMap {
    AlgebraPtr source;
    AlgebraPtr target;
    int shift = 0;
    std::function<Element(const ExpVec&)> action;
};

Element apply(const LinearMap& f, const Element& e);

}  // namespace loopspace
