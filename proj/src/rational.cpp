#include "hamfactor/rational.hpp"

#include "hamfactor/errors.hpp"

namespace hamfactor {

Rat rat(long num, long den) {
    if (den == 0)
        throw InputError("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat rat_parse(const std::string& text) {
    const auto fail = [&] { return ParseError("not a rational literal: '" + text + "'"); };
    if (text.empty())
        throw fail();
    std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    bool digits = false;
    bool seen_slash = false;
    for (std::size_t k = i; k < text.size(); ++k) {
        const char ch = text[k];
        if (ch == '/') {
            if (seen_slash || !digits)
                throw fail();
            seen_slash = true;
            digits = false;
        } else if (ch >= '0' && ch <= '9') {
            digits = true;
        } else {
            throw fail();
        }
    }
    if (!digits)
        throw fail();
    Rat q;
    try {
        q = Rat(text[0] == '+' ? text.substr(1) : text, 10);
    } catch (const std::exception&) {
        throw fail();
    }
    if (q.get_den() == 0)
        throw ParseError("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q) {
    return q.get_str();
}

Rat RatRng::rational(int num_range, int den_range) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return rat(num(eng_), den(eng_));
}

Rat RatRng::nonzero_rational(int num_range, int den_range) {
    for (;;) {
        Rat q = rational(num_range, den_range);
        if (q != 0)
            return q;
    }
}

long RatRng::integer(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(eng_);
}

} // namespace hamfactor
