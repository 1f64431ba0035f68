#include "hamfactor/linform.hpp"

#include <sstream>

#include "hamfactor/errors.hpp"

namespace hamfactor {

LinForm LinForm::param(const std::string& name, const Rat& coeff) {
    LinForm f;
    if (coeff != 0)
        f.terms_[name] = coeff;
    return f;
}

LinForm& LinForm::operator+=(const LinForm& o) {
    constant_ += o.constant_;
    for (const auto& [name, c] : o.terms_) {
        Rat& slot = terms_[name];
        slot += c;
        if (slot == 0)
            terms_.erase(name);
    }
    return *this;
}

LinForm& LinForm::operator-=(const LinForm& o) {
    constant_ -= o.constant_;
    for (const auto& [name, c] : o.terms_) {
        Rat& slot = terms_[name];
        slot -= c;
        if (slot == 0)
            terms_.erase(name);
    }
    return *this;
}

LinForm& LinForm::operator*=(const Rat& s) {
    if (s == 0) {
        constant_ = 0;
        terms_.clear();
        return *this;
    }
    constant_ *= s;
    for (auto& [name, c] : terms_)
        c *= s;
    return *this;
}

LinForm LinForm::operator-() const {
    LinForm f(*this);
    f *= Rat(-1);
    return f;
}

Rat LinForm::evaluate(const Assignment& values) const {
    Rat acc = constant_;
    for (const auto& [name, c] : terms_) {
        auto it = values.find(name);
        if (it == values.end())
            throw InputError("unassigned parameter: " + name);
        acc += c * it->second;
    }
    return acc;
}

LinForm LinForm::substitute(const Assignment& values) const {
    LinForm f;
    f.constant_ = constant_;
    for (const auto& [name, c] : terms_) {
        auto it = values.find(name);
        if (it == values.end())
            f.terms_[name] = c;
        else
            f.constant_ += c * it->second;
    }
    return f;
}

Rat LinForm::coeff(const std::string& name) const {
    auto it = terms_.find(name);
    return it == terms_.end() ? Rat(0) : it->second;
}

LinForm LinForm::with_prefix(const std::string& prefix) const {
    LinForm f;
    f.constant_ = constant_;
    for (const auto& [name, c] : terms_)
        f.terms_[prefix + name] = c;
    return f;
}

std::string LinForm::str() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    if (constant_ != 0) {
        os << rat_str(constant_);
        first = false;
    }
    for (const auto& [name, c] : terms_) {
        if (!first)
            os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0)
            os << "-";
        first = false;
        Rat a = abs(c);
        if (a != 1)
            os << rat_str(a) << "*";
        os << name;
    }
    return os.str();
}

} // namespace hamfactor
