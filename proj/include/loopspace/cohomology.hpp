#pragma once

#include "loopspace/graded_algebra.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace loopspace {

using Matrix = std::vector<std::vector<Rational>>;

/// Reduces m in place to reduced row echelon form; returns the pivot columns.
std::vector<int> reduced_row_echelon(Matrix& m);

/// Rank of a copy of m.
int matrix_rank(Matrix m);

/// One cohomology class: a fully reduced cocycle representative, labeled by
/// its leading monomial.  word_length is the common bar word length of the
/// representative's terms, or -1 if they are mixed.
struct CohomologyClass {
    int degree = 0;
    Element representative;
    std::string label;
    int word_length = -1;
};

/// Decomposition of a closed element against a computed table:
///   e = sum_k coordinates[k] * rep_k + d(witness)
/// in the degree it was projected at.
struct Projection {
    std::vector<Rational> coordinates;
    Element witness;
};

/// Cohomology of one algebra in degrees 0..max_degree, with enough internal
/// state to project arbitrary closed elements onto the chosen class basis.
class CohomologyTable {
  public:
    const AlgebraPtr& algebra() const { return algebra_; }
    int max_degree() const { return max_degree_; }
    int dimension(int n) const { return static_cast<int>(classes(n).size()); }
    const std::vector<CohomologyClass>& classes(int n) const;

  private:
    struct EchelonVector {
        std::vector<Rational> coords;
        int pivot = -1;
        Element preimage;  // image vectors satisfy d(preimage) = coords
    };
    struct DegreeData {
        std::vector<ExpVec> basis;
        std::map<ExpVec, int> index;
        std::vector<EchelonVector> image;
        std::vector<EchelonVector> reps;
    };

    AlgebraPtr algebra_;
    int max_degree_ = -1;
    std::vector<DegreeData> data_;
    std::vector<std::vector<CohomologyClass>> classes_;

    friend CohomologyTable compute_cohomology(const AlgebraPtr& algebra, int max_degree);
    friend Projection project_class(const CohomologyTable& table, const Element& e, int degree);
};

/// Computes cohomology in degrees 0..max_degree.  Kernels at max_degree need
/// the monomial basis one degree higher, so max_degree must stay below the
/// algebra's cutoff.
CohomologyTable compute_cohomology(const AlgebraPtr& algebra, int max_degree);

/// Writes a closed homogeneous element of the given degree as a combination
/// of class representatives plus an explicit coboundary.  Throws
/// NotClosedError when d(e) != 0 and CutoffExceededError when the degree is
/// outside the table.
Projection project_class(const CohomologyTable& table, const Element& e, int degree);

/// Matrix of the map induced on cohomology, one matrix per source degree n
/// with target degree n (Morphism) or n + shift (LinearMap).  Entry [r][k] is
/// the coefficient of target class r in the image of source class k.
std::vector<Matrix> induced_map(const CohomologyTable& source, const CohomologyTable& target,
                                const Morphism& f);
std::vector<Matrix> induced_map(const CohomologyTable& source, const CohomologyTable& target,
                                const LinearMap& f);

struct QuasiIsoReport {
    bool pass = true;
    int witness_degree = -1;
    int source_dimension = 0;
    int target_dimension = 0;
    int rank = 0;
};

/// Checks degree by degree that the induced map is an isomorphism up to and
/// including max_degree.
QuasiIsoReport verify_quasi_iso(const CohomologyTable& source, const CohomologyTable& target,
                                const Morphism& f, int max_degree);

/// Alternating sum of the dimensions over every computed degree.
int euler_characteristic(const CohomologyTable& table);

}  // namespace loopspace
