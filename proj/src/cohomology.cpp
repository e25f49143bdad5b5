#include "loopspace/cohomology.hpp"

#include <algorithm>

namespace loopspace {

namespace {
using Row = std::vector<Rational>;
}

std::vector<int> reduced_row_echelon(Matrix& m) {
    std::vector<int> pivots;
    if (m.empty())
        return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t lead = r;
        while (lead < rows && m[lead][c] == 0)
            ++lead;
        if (lead == rows)
            continue;
        std::swap(m[r], m[lead]);
        Rational inv = Rational(1) / m[r][c];
        for (size_t j = c; j < cols; ++j)
            m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            Rational f = m[i][c];
            for (size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

int matrix_rank(Matrix m) {
    return static_cast<int>(reduced_row_echelon(m).size());
}

namespace {

Row to_row(const Element& e, const std::map<ExpVec, int>& index, size_t size) {
    Row v(size, Rational(0));
    for (const auto& [exps, coeff] : e.terms()) {
        auto it = index.find(exps);
        if (it == index.end())
            throw AlgebraError("element leaves the enumerated monomial basis");
        v[static_cast<size_t>(it->second)] = coeff;
    }
    return v;
}

}  // namespace

const std::vector<CohomologyClass>& CohomologyTable::classes(int n) const {
    if (n < 0 || n > max_degree_)
        throw CutoffExceededError("degree " + std::to_string(n) +
                                  " outside the computed cohomology table (max " +
                                  std::to_string(max_degree_) + ")");
    return classes_[static_cast<size_t>(n)];
}

// Eliminates the echelon pivots from v; the subtracted combination of
// preimages is accumulated into *combo when it is non-null.
template <typename Ech>
static void reduce_against(const std::vector<Ech>& echelon, Row& v, Element* combo) {
    for (const auto& e : echelon) {
        Rational c = v[static_cast<size_t>(e.pivot)];
        if (c == 0)
            continue;
        for (size_t j = 0; j < v.size(); ++j)
            v[j] -= c * e.coords[j];
        if (combo)
            *combo += c * e.preimage;
    }
}

// Inserts v into the echelon if independent, keeping every vector fully
// reduced against every pivot.  Returns false when v reduces to zero.
template <typename Ech>
static bool insert_echelon(std::vector<Ech>& echelon, Row v, Element preimage) {
    Element combo;
    reduce_against(echelon, v, &combo);
    preimage -= combo;
    int pivot = -1;
    for (size_t j = 0; j < v.size(); ++j) {
        if (v[j] != 0) {
            pivot = static_cast<int>(j);
            break;
        }
    }
    if (pivot < 0)
        return false;
    Rational inv = Rational(1) / v[static_cast<size_t>(pivot)];
    for (auto& x : v)
        x *= inv;
    preimage = inv * preimage;
    for (auto& e : echelon) {
        Rational c = e.coords[static_cast<size_t>(pivot)];
        if (c == 0)
            continue;
        for (size_t j = 0; j < v.size(); ++j)
            e.coords[j] -= c * v[j];
        e.preimage -= c * preimage;
    }
    Ech entry;
    entry.coords = std::move(v);
    entry.pivot = pivot;
    entry.preimage = std::move(preimage);
    auto pos = std::find_if(echelon.begin(), echelon.end(),
                            [&](const Ech& e) { return e.pivot > entry.pivot; });
    echelon.insert(pos, std::move(entry));
    return true;
}

CohomologyTable compute_cohomology(const AlgebraPtr& algebra, int max_degree) {
    if (!algebra || !algebra->has_differential())
        throw ConstructionError("cohomology needs an algebra with a differential");
    if (max_degree < 0)
        throw ConstructionError("cohomology degree bound must be nonnegative");
    if (max_degree + 1 > algebra->cutoff())
        throw CutoffExceededError("cohomology to degree " + std::to_string(max_degree) +
                                  " needs monomials up to degree " +
                                  std::to_string(max_degree + 1) + ", beyond cutoff " +
                                  std::to_string(algebra->cutoff()));

    CohomologyTable table;
    table.algebra_ = algebra;
    table.max_degree_ = max_degree;
    table.data_.resize(static_cast<size_t>(max_degree) + 1);
    table.classes_.resize(static_cast<size_t>(max_degree) + 1);

    for (int n = 0; n <= max_degree; ++n) {
        auto& dd = table.data_[static_cast<size_t>(n)];
        dd.basis = algebra->monomial_basis(n);
        for (size_t j = 0; j < dd.basis.size(); ++j)
            dd.index.emplace(dd.basis[j], static_cast<int>(j));

        if (n > 0) {
            for (const ExpVec& u : algebra->monomial_basis(n - 1)) {
                Element pre = monomial_element(algebra, u);
                Element du = differential(pre);
                if (du.is_zero())
                    continue;
                insert_echelon(dd.image, to_row(du, dd.index, dd.basis.size()), pre);
            }
        }

        const std::vector<ExpVec>& next = algebra->monomial_basis(n + 1);
        std::map<ExpVec, int> next_index;
        for (size_t j = 0; j < next.size(); ++j)
            next_index.emplace(next[j], static_cast<int>(j));
        Matrix a(next.size(), Row(dd.basis.size(), Rational(0)));
        for (size_t c = 0; c < dd.basis.size(); ++c) {
            Element dm = differential(monomial_element(algebra, dd.basis[c]));
            Row col = to_row(dm, next_index, next.size());
            for (size_t r = 0; r < next.size(); ++r)
                a[r][c] = std::move(col[r]);
        }
        std::vector<int> pivots = reduced_row_echelon(a);

        std::vector<bool> is_pivot(dd.basis.size(), false);
        for (int p : pivots)
            is_pivot[static_cast<size_t>(p)] = true;
        for (size_t f = 0; f < dd.basis.size(); ++f) {
            if (is_pivot[f])
                continue;
            Row v(dd.basis.size(), Rational(0));
            v[f] = 1;
            for (size_t i = 0; i < pivots.size(); ++i)
                v[static_cast<size_t>(pivots[i])] = -a[i][f];
            reduce_against(dd.image, v, nullptr);
            insert_echelon(dd.reps, std::move(v), Element());
        }

        auto& classes = table.classes_[static_cast<size_t>(n)];
        for (const auto& rep : dd.reps) {
            CohomologyClass cls;
            cls.degree = n;
            Element value = Element::zero(algebra);
            for (size_t j = 0; j < rep.coords.size(); ++j)
                if (rep.coords[j] != 0)
                    value += monomial_element(algebra, dd.basis[j], rep.coords[j]);
            cls.representative = value;
            cls.label = algebra->monomial_label(value.terms().rbegin()->first);
            cls.word_length = algebra->bar_word_length(value.terms().begin()->first);
            for (const auto& [exps, coeff] : value.terms())
                if (algebra->bar_word_length(exps) != cls.word_length)
                    cls.word_length = -1;
            classes.push_back(std::move(cls));
        }
    }
    return table;
}

Projection project_class(const CohomologyTable& table, const Element& e, int degree) {
    if (degree < 0 || degree > table.max_degree_)
        throw CutoffExceededError("projection at degree " + std::to_string(degree) +
                                  " outside the computed cohomology table (max " +
                                  std::to_string(table.max_degree_) + ")");
    const auto& dd = table.data_[static_cast<size_t>(degree)];
    Projection out;
    out.coordinates.assign(dd.reps.size(), Rational(0));
    if (e.is_zero())
        return out;
    if (e.algebra() != table.algebra_)
        throw DomainMismatchError("projection of an element from another algebra");
    if (!e.is_homogeneous() || e.degree() != degree)
        throw AlgebraError("projection needs a homogeneous element of degree " +
                           std::to_string(degree));
    Element de = differential(e);
    if (!de.is_zero())
        throw NotClosedError("element is not closed: d gives " + de.str());

    Row v = to_row(e, dd.index, dd.basis.size());
    reduce_against(dd.image, v, &out.witness);
    for (size_t k = 0; k < dd.reps.size(); ++k) {
        Rational c = v[static_cast<size_t>(dd.reps[k].pivot)];
        out.coordinates[k] = c;
        if (c == 0)
            continue;
        for (size_t j = 0; j < v.size(); ++j)
            v[j] -= c * dd.reps[k].coords[j];
    }
    for (const Rational& x : v)
        if (x != 0)
            throw AlgebraError("projection left a residue; the table is inconsistent");
    return out;
}

namespace {

std::vector<Matrix> induced_core(const CohomologyTable& source, const CohomologyTable& target,
                                 int shift,
                                 const std::function<Element(const Element&)>& push) {
    std::vector<Matrix> out;
    int top = std::min(source.max_degree(), target.max_degree() - shift);
    for (int n = 0; n <= top; ++n) {
        int rows = target.dimension(n + shift);
        int cols = source.dimension(n);
        Matrix m(static_cast<size_t>(rows), Row(static_cast<size_t>(cols), Rational(0)));
        for (int k = 0; k < cols; ++k) {
            Element image = push(source.classes(n)[static_cast<size_t>(k)].representative);
            Projection p = project_class(target, image, n + shift);
            for (int r = 0; r < rows; ++r)
                m[static_cast<size_t>(r)][static_cast<size_t>(k)] =
                    p.coordinates[static_cast<size_t>(r)];
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace

std::vector<Matrix> induced_map(const CohomologyTable& source, const CohomologyTable& target,
                                const Morphism& f) {
    return induced_core(source, target, 0,
                        [&](const Element& e) { return apply(f, e); });
}

std::vector<Matrix> induced_map(const CohomologyTable& source, const CohomologyTable& target,
                                const LinearMap& f) {
    return induced_core(source, target, f.shift,
                        [&](const Element& e) { return apply(f, e); });
}

QuasiIsoReport verify_quasi_iso(const CohomologyTable& source, const CohomologyTable& target,
                                const Morphism& f, int max_degree) {
    if (max_degree > source.max_degree() || max_degree > target.max_degree())
        throw ConstructionError("quasi-isomorphism check beyond the computed tables");
    std::vector<Matrix> mats = induced_map(source, target, f);
    for (int n = 0; n <= max_degree; ++n) {
        int sd = source.dimension(n);
        int td = target.dimension(n);
        int rank = matrix_rank(mats[static_cast<size_t>(n)]);
        if (sd != td || rank != sd)
            return {false, n, sd, td, rank};
    }
    return {};
}

int euler_characteristic(const CohomologyTable& table) {
    int chi = 0;
    for (int n = 0; n <= table.max_degree(); ++n)
        chi += n % 2 == 0 ? table.dimension(n) : -table.dimension(n);
    return chi;
}

}  // namespace loopspace
