#pragma once

#include "loopspace/loop_models.hpp"
#include "loopspace/model_io.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace loopspace::testing {

inline std::string models_dir() {
    return LOOPSPACE_MODELS_DIR;
}

inline ModelDescription read_model_file(const std::string& stem) {
    std::ifstream in(models_dir() + "/" + stem + ".model");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ModelDescription d = parse_model(buffer.str());
    d.name = stem;
    return d;
}

/// Deterministic pseudo-random homogeneous element: a few monomials of the
/// given degree with small nonzero integer coefficients. Uses raw mt19937
/// words so the stream is platform independent.
inline Element random_element(std::mt19937& rng, const AlgebraPtr& alg, int degree,
                              int max_terms = 3) {
    const auto& basis = alg->monomial_basis(degree);
    Element out = Element::zero(alg);
    if (basis.empty())
        return out;
    int terms = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    for (int t = 0; t < terms; ++t) {
        const ExpVec& exps = basis[rng() % basis.size()];
        int c = 1 + static_cast<int>(rng() % 5u);
        if (rng() % 2u == 0)
            c = -c;
        out += monomial_element(alg, exps, Rational(c));
    }
    return out;
}

}  // namespace loopspace::testing
