#include "lat/rational.hpp"

namespace lat {

Rat rat_parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw BadInput("empty rational literal");
    try {
        Rat q(t);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw BadInput("cannot parse rational literal '" + text + "'");
    }
}

QIv QIv::operator*(const QIv& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = a, mx = a;
    for (const Rat* v : {&b, &c, &d}) {
        if (*v < mn) mn = *v;
        if (*v > mx) mx = *v;
    }
    return QIv(mn, mx);
}

} // namespace lat
