#pragma once

// The Whitehead exact sequence of a minimal model:
//
//   ... -> H^n(ΛV) -j-> V^n -b-> Γ^{n+1} -i-> H^{n+1}(ΛV) -j-> V^{n+1} -> ...
//
// with Γ^{n+1} = H^{n+1}(ΛV^{<=n-1}), b(v) = [d v], i induced by inclusion and
// j the linear part of a representative. Maps are stored at the degree of
// their domain: b^n leaves V^n (some texts call the same map b^{n+1}).

#include "mcca/cohomology.hpp"
#include "mcca/sparse.hpp"

#include <string>
#include <vector>

namespace mcca {

struct WesDegree {
    int n = 0;
    std::vector<std::size_t> generators;  // V^n, as generator indices
    std::size_t gamma_dim = 0;            // Γ^{n+1}
    std::size_t h_dim = 0;                // H^{n+1}(ΛV)
    std::size_t h_in_dim = 0;             // H^n(ΛV)
    SparseMatrix j_in;                    // H^n(ΛV) -> V^n
    SparseMatrix b;                       // V^n -> Γ^{n+1}
    SparseMatrix i;                       // Γ^{n+1} -> H^{n+1}(ΛV)
    bool i_is_identity = false;           // Γ^{n+1} and H^{n+1}(ΛV) share one basis
};

struct WhiteheadSequence {
    ModelPtr model;
    int first = 3;
    int last = 3;
    std::vector<WesDegree> degrees;  // first..last
    SparseMatrix j_out;              // H^{last+1}(ΛV) -> V^{last+1}

    const WesDegree& at(int n) const { return degrees.at(static_cast<std::size_t>(n - first)); }
    WesDegree& at(int n) { return degrees.at(static_cast<std::size_t>(n - first)); }
};

/// Builds the sequence over [3, last]; last < 3 means top generator degree + 1.
WhiteheadSequence build_wes(ModelPtr m, int last = 0);

/// H^n(ΛV) -> V^n in the basis of cohomology(m, n).
SparseMatrix j_map(const SullivanModel& m, int n);

struct ExactnessNode {
    std::string name;  // e.g. "V^41", "Γ^42", "H^42"
    int degree = 0;
    std::size_t dimension = 0;
    std::size_t rank_in = 0;
    std::size_t rank_out = 0;
    bool composite_zero = true;
    bool exact = true;
};

struct ExactnessReport {
    std::vector<ExactnessNode> nodes;
    bool exact() const;
    /// First node that is not exact, or nullptr.
    const ExactnessNode* first_failure() const;
};

ExactnessReport check_exactness(const WhiteheadSequence& w);

struct NaturalitySquare {
    std::string name;
    bool commutes = true;
    std::string detail;
};

struct NaturalityReport {
    int degree = 0;
    std::vector<NaturalitySquare> squares;
    bool commutes() const;
};

/// Compares the sequences of source and target at degree n through f:
/// b' ξ = H(f) b on V^n, i' H(f) = H(f) i on Γ^{n+1}, j' H(f) = ξ j on H^n.
NaturalityReport naturality_check(const CochainMorphism& f, int n);

}  // namespace mcca
