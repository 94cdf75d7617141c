#pragma once

// Coherent morphisms: graded linear maps between generator spaces that lift,
// stage by stage, to cochain morphisms of the models.

#include "mcca/cohomology.hpp"
#include "mcca/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mcca {

/// Degree-preserving linear map V -> W between the generator spaces of two
/// models. Block d is a |W^d| x |V^d| matrix; absent blocks are zero.
class GradedLinearMap {
public:
    GradedLinearMap(ModelPtr source, ModelPtr target);

    static GradedLinearMap identity(ModelPtr m);
    /// For models with at most one generator per degree: v_d -> p_d w_d.
    /// Degrees missing from `p` map to zero.
    static GradedLinearMap diagonal(ModelPtr source, ModelPtr target, const std::map<int, Rational>& p);
    static GradedLinearMap diagonal(ModelPtr m, const std::map<int, Rational>& p) { return diagonal(m, m, p); }

    const ModelPtr& source() const { return source_; }
    const ModelPtr& target() const { return target_; }

    /// Throws when the shape does not match the generator counts in degree d.
    void set_block(int d, RationalMatrix block);
    RationalMatrix block(int d) const;
    const std::map<int, RationalMatrix>& blocks() const { return blocks_; }

    /// ξ(v) as a linear polynomial in the target generators.
    Polynomial image(std::size_t source_generator) const;

    /// Diagonal entries keyed by degree (models with one generator per degree).
    std::map<int, Rational> diagonal_entries() const;

    bool operator==(const GradedLinearMap& o) const;

private:
    ModelPtr source_, target_;
    std::map<int, RationalMatrix> blocks_;
};

/// g ∘ f
GradedLinearMap compose(const GradedLinearMap& g, const GradedLinearMap& f);
/// Throws when some block is not invertible.
GradedLinearMap inverse(const GradedLinearMap& f);

/// Why a lift does not exist along the canonical branch: at generator v of
/// degree d, α(dv) - d(ξ v) is not a coboundary in ΛW^{<=d-1}.
struct Obstruction {
    int degree = 0;
    std::size_t generator = 0;
    std::string generator_name;
    Polynomial difference;                // α(dv) - d(ξ v), degree d + 1
    std::vector<Rational> class_coordinates;  // in cohomology(target, d + 1, d - 1)
};

struct LiftResult {
    std::optional<CochainMorphism> morphism;
    std::optional<Obstruction> obstruction;

    bool ok() const { return morphism.has_value(); }
};

/// Lifts ξ generator by generator, in degree order: θ(v) = ξ(v) + u with
/// d u = α(dv) - d(ξ v) solved in the truncation below |v| (free variables zero).
LiftResult try_lift(const GradedLinearMap& xi);

struct CoherenceVerdict {
    bool coherent = false;
    std::string label;  // "coherent (witness found)" or "obstructed along canonical branch"
    LiftResult lift;
};

CoherenceVerdict is_coherent(const GradedLinearMap& xi);

/// Linear part of f on generators.
GradedLinearMap induced_on_indecomposables(const CochainMorphism& f);

struct InverseLift {
    GradedLinearMap xi;  // ξ^{-1}
    CochainMorphism theta;  // θ^{-1}
};

/// Inverts a lift θ of an invertible ξ by back-substitution along generator
/// degrees; checks both composites are the identity.
InverseLift invert_coherent(const GradedLinearMap& xi, const CochainMorphism& theta);

struct GapRow {
    int degree = 0;            // a generator degree d
    std::size_t dimension = 0;  // dim (ΛV^{<=d-1})^d
};

struct GapReport {
    std::vector<GapRow> rows;
    /// Every correction space is zero, so lifts are unique.
    bool unique_lifts() const;
};

GapReport gap_report(const SullivanModel& m);

}  // namespace mcca
