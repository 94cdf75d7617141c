#pragma once

// Degree-wise cochain complexes of a model and of its truncations ΛV^{<=c}.
//
// Every degree k is indexed in the full monomial basis of (ΛV)^k; a truncation
// only restricts which basis columns take part. Eliminations and cohomology
// bases are memoized on the model.

#include "mcca/linalg.hpp"
#include "mcca/model.hpp"
#include "mcca/sparse.hpp"

#include <climits>
#include <memory>
#include <mutex>
#include <vector>

namespace mcca {

/// Cutoff meaning "no truncation".
inline constexpr int kNoCutoff = INT_MAX;

class NotACocycle : public Error {
public:
    using Error::Error;
};

struct CohomologyBasis {
    int degree = 0;
    int cutoff = kNoCutoff;
    std::vector<Polynomial> representatives;
    std::size_t cocycles = 0;    // dim ker d^k
    std::size_t coboundaries = 0;  // rank d^{k-1}

    std::size_t dimension() const { return representatives.size(); }
};

struct CohomologyClass {
    std::vector<Rational> coordinates;
    bool is_zero() const;
};

/// Matrix of d: (ΛV^{<=c})^k -> (ΛV^{<=c})^{k+1} in the monomial bases.
RationalMatrix coboundary_matrix(const SullivanModel& m, int k, int cutoff = kNoCutoff);

CohomologyBasis cohomology(const SullivanModel& m, int k, int cutoff = kNoCutoff);

/// Coordinates of [p] in the basis returned by cohomology(m, k, cutoff).
/// Throws NotACocycle when d p != 0, Error when p does not live in ΛV^{<=c}.
CohomologyClass class_of(const SullivanModel& m, int k, const Polynomial& p, int cutoff = kNoCutoff);

/// Matrix of H^k(f) between the computed cohomology bases.
RationalMatrix induced_map(const CochainMorphism& f, int k, int cutoff = kNoCutoff);

/// Truncation-pair complex (ΛV^{<=n+1}; ΛV^{<=n-1}) in degree k, represented by
/// the monomials that contain a generator of degree n or n+1. Returns dim H^k.
std::size_t pair_cohomology_dimension(const SullivanModel& m, int n, int k);

/// Frees memoized eliminations and cohomology bases of m (they are rebuilt on demand).
void release_cache(const SullivanModel& m);

namespace detail {

/// Elimination of d^k restricted to a truncation.
struct PassView {
    const ColumnReduction* reduction = nullptr;
    const std::vector<std::uint32_t>* columns = nullptr;  // column position -> basis index in degree k
    std::size_t row_limit = 0;
    std::size_t kernel_limit = 0;
    int degree = 0;
    std::shared_ptr<const void> keep_alive;
};

/// Cohomology data with a combined echelon: coboundary rows first, then one
/// row per class (these rows are the representatives).
struct CohomologyData {
    int degree = 0;
    int cutoff = kNoCutoff;
    std::size_t cocycles = 0;
    Echelon echelon;
    std::size_t boundary_rows = 0;

    std::size_t dimension() const { return echelon.size() - boundary_rows; }
    const SparseVector& representative(std::size_t i) const { return echelon.row(boundary_rows + i); }
    /// Coordinates of a cocycle given in full-basis coordinates.
    SparseVector coordinates(const SparseVector& cocycle) const;
};

const DegreeBasis& full_basis(const SullivanModel& m, int k);
PassView pass(const SullivanModel& m, int k, int cutoff);
std::shared_ptr<const CohomologyData> cohomology_data(const SullivanModel& m, int k, int cutoff);

/// Normalized cutoff: values >= k mean the full complex in degree k.
int effective_cutoff(int k, int cutoff);

SparseVector to_sparse(const SullivanModel& m, const Polynomial& p, int k);
Polynomial to_polynomial(const SullivanModel& m, const SparseVector& v, int k);
SparseVector differential_column(const SullivanModel& m, const Monomial& mono);

/// Kernel vector `i` of the pass, in basis coordinates of degree k.
SparseVector kernel_vector(const PassView& p, std::size_t i);

/// Solves d u = target inside the truncation ΛV^{<=cutoff} (u of degree k,
/// target of degree k+1). The particular solution only uses pivot columns.
std::optional<Polynomial> solve_coboundary(const SullivanModel& m, int k, int cutoff, const Polynomial& target);

}  // namespace detail

}  // namespace mcca
