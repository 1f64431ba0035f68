#pragma once

#include <map>
#include <string>

#include "hamfactor/rational.hpp"

namespace hamfactor {

using Assignment = std::map<std::string, Rat>;

/// Affine-linear form over Rat in named parameters: constant + sum of
/// coeff * param. Zero coefficients are never stored.
class LinForm {
public:
    LinForm() = default;
    LinForm(const Rat& constant) : constant_(constant) {}
    LinForm(long constant) : constant_(rat(constant)) {}

    static LinForm param(const std::string& name, const Rat& coeff = Rat(1));

    const Rat& constant() const { return constant_; }
    const std::map<std::string, Rat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty() && constant_ == 0; }
    bool is_constant() const { return terms_.empty(); }

    LinForm& operator+=(const LinForm& o);
    LinForm& operator-=(const LinForm& o);
    LinForm& operator*=(const Rat& s);
    LinForm operator-() const;

    friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
    friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
    friend LinForm operator*(LinForm a, const Rat& s) { return a *= s; }
    friend LinForm operator*(const Rat& s, LinForm a) { return a *= s; }

    bool operator==(const LinForm& o) const {
        return constant_ == o.constant_ && terms_ == o.terms_;
    }
    bool operator!=(const LinForm& o) const { return !(*this == o); }

    /// Full evaluation; every parameter of the form must be assigned.
    Rat evaluate(const Assignment& values) const;

    /// Replace the given parameters, keep the rest symbolic.
    LinForm substitute(const Assignment& values) const;

    /// Coefficient of a parameter (zero if absent).
    Rat coeff(const std::string& name) const;

    /// Renames every parameter to prefix + name.
    LinForm with_prefix(const std::string& prefix) const;

    std::string str() const;

private:
    Rat constant_ = Rat(0);
    std::map<std::string, Rat> terms_;
};

} // namespace hamfactor
