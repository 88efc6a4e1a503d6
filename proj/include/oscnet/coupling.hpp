#pragma once

#include <cmath>
#include <string>

namespace oscnet {

/// Coupling function D(u) acting on phase differences. All supported kinds
/// are of the form scale * sin(freq * u) (freq 1 or 2) or a constant, so the
/// evaluation is closed under scaling and every kind has exact Lipschitz and
/// sup bounds.
class CouplingFunction {
public:
    enum class Base { Sin, Sin2, One };

    static CouplingFunction sine() { return {Base::Sin, 1.0}; }
    static CouplingFunction double_sine() { return {Base::Sin2, 1.0}; }
    static CouplingFunction constant_one() { return {Base::One, 1.0}; }
    static CouplingFunction scaled(double c, const CouplingFunction& inner) {
        return {inner.base_, c * inner.scale_};
    }

    double operator()(double u) const {
        switch (base_) {
            case Base::Sin:  return scale_ * std::sin(u);
            case Base::Sin2: return scale_ * std::sin(2.0 * u);
            case Base::One:  return scale_;
        }
        return 0.0;
    }

    double lipschitz_bound() const {
        switch (base_) {
            case Base::Sin:  return std::abs(scale_);
            case Base::Sin2: return 2.0 * std::abs(scale_);
            case Base::One:  return 0.0;
        }
        return 0.0;
    }

    double sup_bound() const { return std::abs(scale_); }

    Base base() const { return base_; }
    double scale() const { return scale_; }
    /// sin-frequency for the factored evaluation path (0 for the constant kind).
    int harmonic() const { return base_ == Base::Sin ? 1 : base_ == Base::Sin2 ? 2 : 0; }
    bool is_constant() const { return base_ == Base::One; }

    std::string name() const {
        std::string b = base_ == Base::Sin ? "sine" : base_ == Base::Sin2 ? "double-sine" : "constant-one";
        return scale_ == 1.0 ? b : "scaled(" + std::to_string(scale_) + ", " + b + ")";
    }

private:
    CouplingFunction(Base b, double s) : base_(b), scale_(s) {}
    Base base_;
    double scale_;
};

} // namespace oscnet
