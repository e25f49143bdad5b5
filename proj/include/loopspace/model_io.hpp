#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loopspace/graded_algebra.hpp"

namespace loopspace {

/// One normalized polynomial term: sorted powers with exponents >= 1 and a
/// nonzero rational coefficient. Empty powers mean the constant term.
struct PolyTerm {
    Rational coefficient;
    std::vector<std::pair<std::string, int>> powers;

    bool operator==(const PolyTerm&) const = default;
};

/// A normalized polynomial: terms sorted by their power vectors, like terms
/// combined, zero coefficients dropped.
using Poly = std::vector<PolyTerm>;

Poly normalize(Poly p);
std::string poly_str(const Poly& p);
int poly_degree(const Poly& p, const std::map<std::string, int>& degrees);
Element to_element(const Poly& p, const AlgebraPtr& algebra);

/// A parsed and validated model file: the generators of a 1-connected
/// Sullivan model, their differentials, optional power truncations, and the
/// manifold's dimension with its orienting fundamental monomial.
struct ModelDescription {
    std::string name = "model";
    std::vector<std::pair<std::string, int>> generators;  // declaration order
    std::map<std::string, Poly> differentials;            // absent name = zero
    std::map<std::string, int> truncations;               // g^k = 0
    int dimension = 0;
    std::vector<std::pair<std::string, int>> fundamental;  // monomial powers

    int degree_of(const std::string& generator_name) const;

    bool operator==(const ModelDescription&) const = default;
};

/// Parses the model description language:
///
///   generator <name> : <degree>
///   d <name> = <poly>
///   relation <name>^<k> = 0
///   dimension <m>
///   fundamental <monomial>
///
/// One declaration per line, `#` starts a comment. Polynomials use integer
/// coefficients, `^` powers, `*` or juxtaposition for products, `+`/`-`, and
/// parentheses. Names must be declared before use. Every violation raises
/// ParseError with a line/column position; valid input never throws anything
/// else.
ModelDescription parse_model(std::string_view text);

/// Canonical serialization; parse(print_model(parse(text))) == parse(text).
std::string print_model(const ModelDescription& m);

}  // namespace loopspace
