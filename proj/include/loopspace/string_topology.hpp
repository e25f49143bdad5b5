#pragma once

#include "loopspace/cohomology.hpp"
#include "loopspace/loop_models.hpp"

namespace loopspace {

/// Poincare duality data for the base cohomology: the flattened class basis,
/// the dual basis pairing to the identity matrix against the orientation,
/// and the Euler characteristic from the Betti numbers.
struct DualBasis {
    AlgebraPtr base;
    int dimension = 0;
    std::vector<CohomologyClass> classes;  // degrees 0..dimension, class order
    std::vector<Element> duals;            // duals[k] has degree dimension - classes[k].degree
    Element orientation;                   // top element with evaluation exactly 1
    Rational top_scale;                    // orientation's coefficient on the top class
    int euler_characteristic = 0;
};

/// Builds the dual basis from a base cohomology table computed at least up to
/// the dimension.  Throws PoincareDualityError when the top cohomology is not
/// a line, the fundamental monomial is exact, or the intersection pairing is
/// degenerate.  negate_orientation flips the sign of every evaluation.
DualBasis poincare_dual_basis(const CohomologyTable& base_table, const ExpVec& fundamental,
                              int dimension, bool negate_orientation);

/// Evaluation of a top-degree element against the orientation: the
/// coefficient of the orientation class in its projection.
Rational evaluate_top(const DualBasis& db, const CohomologyTable& base_table, const Element& e);

/// Morphism sending every generator `g` of the source to the generator named
/// `g<suffix>` in the target.
Morphism lift_into(const AlgebraPtr& source, const AlgebraPtr& target,
                   const std::string& suffix);

/// Diagonal Euler class sum_l (-1)^{|b_l|} dual(b_l) (x) b_l in the two-copy
/// base algebra.  Its multiplication back to the base is the Euler
/// characteristic times the orientation class.
Element diagonal_euler_class(const DualBasis& db, const AlgebraPtr& base_square);

/// The same class formed inside the two-base-copy loop model; multiplication
/// by it is what the wrong-way map below reduces to after merging copies.
Element euler_class_delta_in(const DualBasis& db, const AlgebraPtr& mprime);

/// Wrong-way map of degree +dimension from the composable-pairs model into
/// the two-copy loop model:
///   a * B  ->  1/2 (a^(1) + a^(2)) * B * E
/// for a in the base, B a product of bars, and E the class above.  The map
/// is linear, not multiplicative, and anticommutes with the differentials up
/// to (-1)^dimension only when the base truncations realize the duality at
/// chain level; verify_shriek_anticommutation checks exactly that.
LinearMap shriek_map(const LoopModelBundle& bundle, const DualBasis& db);

struct ShriekReport {
    bool pass = true;
    int witness_degree = -1;
    ExpVec witness;
};

/// Sweeps monomials of the composable-pairs model up to max_degree checking
/// d(shriek w) = (-1)^dimension shriek(d w).
ShriekReport verify_shriek_anticommutation(const LoopModelBundle& bundle,
                                           const LinearMap& shriek, int max_degree);

/// Sweeps monomials w of the two-copy loop model up to max_degree checking
/// rho(shriek(merge w)) = rho(w * E), the compression of the wrong-way map
/// to multiplication by the Euler class.
ShriekReport verify_shriek_euler_identity(const LoopModelBundle& bundle,
                                          const LinearMap& shriek, const Element& euler,
                                          int max_degree);

/// Chain-level value of the loop coproduct pairing on two representatives:
/// multiply into the double loop model, merge the base copies, apply the
/// wrong-way map, multiply the loops back together.
Element coproduct_representative(const LoopModelBundle& bundle, const LinearMap& shriek,
                                 const Element& rep1, const Element& rep2);

struct CoproductResult {
    int degree = 0;                      // class degrees plus the dimension
    Element representative;              // chain-level image in the loop model
    std::vector<Rational> coordinates;   // on the loop class basis in that degree
};

CoproductResult dual_loop_coproduct(const LoopModelBundle& bundle, const LinearMap& shriek,
                                    const CohomologyTable& loop_table,
                                    const CohomologyClass& c1, const CohomologyClass& c2);

/// Classes of one degree grouped by the bar word length of their
/// representatives.
struct HodgeComponent {
    int word_length = 0;
    std::vector<int> class_indices;
};
struct HodgeDecomposition {
    int degree = 0;
    std::vector<HodgeComponent> components;
};

/// Splits H^degree of the loop model by bar word length.  Throws when a
/// representative mixes word lengths; the loop differential preserves the
/// length, so reduced representatives never do.
HodgeDecomposition hodge_decomposition(const CohomologyTable& loop_table, int degree);

struct HodgeReport {
    bool pass = true;
    int degree1 = -1;
    int degree2 = -1;
    std::string witness;  // labels of the offending class pair
};

/// Checks over every class pair with degree sum at most max_pair_degree that
/// the coproduct of word lengths (i, j) lands in word length i + j.
HodgeReport verify_hodge_additivity(const LoopModelBundle& bundle, const LinearMap& shriek,
                                    const CohomologyTable& loop_table, int max_pair_degree);

}  // namespace loopspace
