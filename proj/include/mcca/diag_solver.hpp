#pragma once

// Diagonal models (at most one generator per degree): a diagonal ξ is a tuple
// of scalars p_d, and coherence of ξ reduces to monomial equations in the p_d.

#include "mcca/coherence.hpp"
#include "mcca/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mcca {

class NotDiagonal : public Error {
public:
    using Error::Error;
};

/// lhs · Π p^lhs_exp = coefficient · Π p^rhs_exp, lhs ∈ {0, 1}.
struct MonomialEquation {
    int lhs = 1;
    std::vector<int> lhs_exp;
    Rational coefficient{1};
    std::vector<int> rhs_exp;
    std::optional<std::size_t> target;  // set when the left side is a single p_v
    std::string origin;                 // e.g. "d(z) ∋ x1^12"
};

struct MonomialConstraintSystem {
    std::vector<int> degrees;        // one variable p_d per generator degree, ascending
    std::vector<std::string> names;  // generator names (source side)
    std::vector<MonomialEquation> equations;
    bool complete = true;  // false: necessary conditions only
    std::vector<std::string> notes;

    std::size_t size() const { return degrees.size(); }
    /// Variables that are not the target of any equation.
    std::vector<std::size_t> sources() const;
    std::string to_string(const MonomialEquation& e) const;
};

/// One equation p_v = Π p_w^{e_w} per monomial of d v. Throws NotDiagonal.
MonomialConstraintSystem extract_constraints(const SullivanModel& m);

/// System for diagonal maps A -> B (coefficient ratios c^A / c^B; a monomial on
/// one side only forces a zero). Throws NotDiagonal or Error when the degree
/// sets differ.
MonomialConstraintSystem cross_constraints(const SullivanModel& a, const SullivanModel& b);

/// Solutions with a fixed zero pattern: p = s * q with s = (-1)^σ and q > 0.
struct SupportCase {
    std::vector<bool> zero;  // per variable
    BitVector sign_base;
    std::vector<BitVector> sign_kernel;
    std::vector<Rational> magnitude_base;          // q at the zero lattice point
    std::vector<std::vector<Integer>> free_kernel;  // exponent directions (per prime)
    std::vector<std::vector<Rational>> solutions;  // explicit list when finite

    bool finite() const { return free_kernel.empty(); }
    std::size_t count() const { return finite() ? std::size_t{1} << sign_kernel.size() : 0; }
};

struct SolutionSet {
    std::vector<SupportCase> cases;  // feasible zero patterns only
    std::size_t infeasible = 0;
    std::string invertible_reason;   // why the all-nonzero pattern has no solution

    bool finite() const;
    /// All solutions (finite sets only), in case order.
    std::vector<std::vector<Rational>> all() const;
    /// The case with no zero variable, when it is feasible.
    const SupportCase* invertible() const;
};

SolutionSet solve(const MonomialConstraintSystem& s);

/// Whether p satisfies every equation exactly.
bool satisfies(const MonomialConstraintSystem& s, const std::vector<Rational>& p);

struct GroupStructure {
    bool finite = true;
    std::size_t morphisms = 0;    // finite case
    std::size_t order = 0;        // invertible solutions, finite case
    std::size_t sign_rank = 0;    // F2-rank of the sign solutions (torsion subgroup)
    std::size_t free_rank = 0;    // Z-rank of the magnitude lattice
    std::size_t family_sign_rank = 0;  // sign rank modulo signs reached along free directions

    /// "Z2", "Z2⊕Z2", "(Z2)^5", "trivial", or "infinite (...)".
    std::string name() const;
};

GroupStructure group_structure(const SolutionSet& s);

/// Lifts every explicit solution (and, for families, the base point and one
/// step along each direction) with try_lift.
struct LiftCheck {
    std::size_t checked = 0;
    std::size_t lifted = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

LiftCheck verify_by_lifting(ModelPtr source, ModelPtr target, const MonomialConstraintSystem& s,
                            const SolutionSet& solutions);

GradedLinearMap to_map(ModelPtr source, ModelPtr target, const MonomialConstraintSystem& s,
                       const std::vector<Rational>& p);

struct IsoDecision {
    bool exists = false;
    std::string reason;
    std::optional<std::vector<Rational>> witness;
    std::optional<CochainMorphism> lift;
};

IsoDecision coherent_iso_exists(ModelPtr a, ModelPtr b);

}  // namespace mcca
