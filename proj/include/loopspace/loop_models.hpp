#pragma once

#include "loopspace/graded_algebra.hpp"
#include "loopspace/model_io.hpp"

#include <string>
#include <vector>

namespace loopspace {

/// Builds the base algebra of a model description: the declared generators
/// with their truncations and differentials.  An odd generator whose declared
/// differential is nonzero but vanishes after truncation is dropped together
/// with its differential; its bar class still enters the derived algebras
/// below.  Dropped generators may not appear in any other differential.
AlgebraPtr build_base_algebra(const ModelDescription& description, int cutoff);

/// Free loop space model: base tensor one exterior/polynomial copy of the
/// suspended generators, with d(vbar) = -s(dv) for the degree -1 derivation
/// s(v) = vbar.  The suspension of d(v) is computed before truncation so that
/// bars of dropped generators acquire their induced differentials.
AlgebraPtr build_loop_model(const ModelDescription& description, const AlgebraPtr& base);

/// Model of the space of composable loop pairs: base tensor two suspended
/// copies, d(vbar_i) = -s_i(dv).
AlgebraPtr build_fiber_product_model(const ModelDescription& description,
                                     const AlgebraPtr& base);

/// Alternative loop model with two base copies: generators v1, v2, vbar1,
/// vbar2 and
///   d(vbar_i) = exp(-s_i d)(v_i) - v_j,   {i, j} = {1, 2},
/// where s_i sends both base copies of v to vbar_i.  The series is evaluated
/// in the untruncated companion algebra by induction on generator degree and
/// then reduced modulo truncations.
AlgebraPtr build_mprime_model(const ModelDescription& description, const AlgebraPtr& base);

/// sum_k (-1)^k/k! (s d)^k (seed), iterated until the term vanishes.  A term
/// still alive after `cap` applications is treated as non-terminating and
/// rejected with SeriesDivergenceError.
Element exponential_series(const DerivationSpec& s, const DerivationSpec& d,
                           const Element& seed, int cap);

/// Renames every copy1/copy2 generator of the source to its base name
/// (dropping the trailing copy digit) and maps it to the generator of the
/// same base name in the target.  Bars keep their names unless merge_bars is
/// set, in which case their copy digits are dropped as well.
Morphism merge_copies(const AlgebraPtr& source, const AlgebraPtr& target, bool merge_bars);

/// One model description expanded into every algebra and map the string
/// topology operations need.
struct LoopModelBundle {
    ModelDescription description;
    AlgebraPtr base;
    AlgebraPtr loop;           // base (x) suspended copy
    AlgebraPtr loop_square;    // loop (x) loop
    AlgebraPtr fiber_product;  // base (x) two suspended copies
    AlgebraPtr mprime;         // two base copies (x) two suspended copies
    Morphism delta_out;        // loop_square -> fiber_product, merges base copies
    Morphism delta_in;         // mprime -> fiber_product, merges base copies
    Morphism rho;              // mprime -> loop, merges base and bar copies
    int dimension = 0;
    ExpVec fundamental;        // orientation monomial, in base exponents
    int cutoff = 0;
};

LoopModelBundle build_loop_bundle(const ModelDescription& description, int cutoff);

struct WordLengthReport {
    bool pass = true;
    int witness_degree = -1;
    ExpVec witness;
};

/// Checks that the differential maps each monomial to terms of the same bar
/// word length, for every monomial of degree at most max_degree.
WordLengthReport verify_word_length_preserved(const AlgebraPtr& algebra, int max_degree);

/// Checks that the differential never increases bar word length.  The two
/// base copies of the mprime model satisfy only this weaker bound: d(vbar_i)
/// contains the length-zero term v_i - v_j.
WordLengthReport verify_word_length_nonincreasing(const AlgebraPtr& algebra, int max_degree);

/// Checks that a morphism maps each monomial to terms of the same bar word
/// length.
WordLengthReport verify_word_length_preserved(const Morphism& f, int max_degree);

}  // namespace loopspace
