#pragma once

#include "mcca/algebra.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mcca {

struct ComplexCache;

/// A differential term that normalized to zero (e.g. an odd generator squared).
struct VanishedTerm {
    std::string generator;  // whose differential it belonged to
    std::string term;       // as written, e.g. "x3^40"

    std::string message() const { return "d(" + generator + "): term " + term + " normalized to zero"; }
    bool operator==(const VanishedTerm&) const = default;
};

/// A free graded-commutative algebra with a differential: the pair (ΛV, d).
///
/// The differential is stored per generator. Differential terms that
/// normalized to zero while the model was written down (odd generators raised
/// to a power >= 2) are kept as notes so that validation can report them.
class SullivanModel {
public:
    SullivanModel(std::string label, GeneratorSet gens, std::vector<Polynomial> differential,
                  std::vector<VanishedTerm> vanished_terms = {});
    SullivanModel(const SullivanModel& o);
    SullivanModel(SullivanModel&& o) noexcept;
    SullivanModel& operator=(const SullivanModel&) = delete;
    ~SullivanModel();

    const std::string& label() const { return label_; }
    const GeneratorSet& generators() const { return gens_; }
    const Polynomial& differential(std::size_t gen) const { return differential_.at(gen); }
    const std::vector<Polynomial>& differentials() const { return differential_; }
    const std::vector<VanishedTerm>& vanished_terms() const { return vanished_; }

    /// Degree-wise bases, eliminations and cohomology, memoized per model.
    ComplexCache& cache() const { return *cache_; }

    /// Same generators and differential (labels and notes are ignored).
    bool same_algebra(const SullivanModel& o) const;

private:
    std::string label_;
    GeneratorSet gens_;
    std::vector<Polynomial> differential_;
    std::vector<VanishedTerm> vanished_;
    std::unique_ptr<ComplexCache> cache_;
};

using ModelPtr = std::shared_ptr<const SullivanModel>;

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    std::vector<std::string> warnings;

    bool ok() const;
};

/// Degree (+1), minimality, 1-connectedness and d∘d = 0, plus vanished-term warnings.
ValidationReport validate(const SullivanModel& m);

/// Leibniz extension with d(ab) = d(a) b + (-1)^|a| a d(b). Throws when p is not homogeneous.
Polynomial apply_differential(const SullivanModel& m, const Polynomial& p);
Polynomial apply_differential(const SullivanModel& m, const Monomial& mono);

/// Sub-model on the generators of degree <= n.
SullivanModel truncate(const SullivanModel& m, int n);

struct TowerStep {
    int degree = 0;
    int exponent = 0;
    std::string name;  // empty: x<degree>, made unique if needed
};

/// Adds a closed generator x of the given degree and replaces d(z) by d(z) + x^k.
/// A term that vanishes (odd degree, k >= 2) is recorded as a note, not stored.
SullivanModel extend_tower(const SullivanModel& m, const std::string& closing_generator, const TowerStep& step,
                           std::string label = {});

/// Multiplicative map of algebras that commutes with the differentials.
/// Every instance is checked on construction.
class CochainMorphism {
public:
    CochainMorphism(ModelPtr source, ModelPtr target, std::vector<Polynomial> images);

    static CochainMorphism identity(ModelPtr m);

    const ModelPtr& source() const { return source_; }
    const ModelPtr& target() const { return target_; }
    const Polynomial& image(std::size_t gen) const { return images_.at(gen); }
    const std::vector<Polynomial>& images() const { return images_; }

    Polynomial apply(const Polynomial& p) const;
    Polynomial apply(const Monomial& m) const;

    bool operator==(const CochainMorphism& o) const;

private:
    ModelPtr source_, target_;
    std::vector<Polynomial> images_;
};

/// Image of a monomial under the multiplicative extension of generator images.
Polynomial apply_images(const std::vector<Polynomial>& images, const Monomial& m, const GeneratorSet& target);

/// f ∘ g
CochainMorphism compose(const CochainMorphism& f, const CochainMorphism& g);

}  // namespace mcca
