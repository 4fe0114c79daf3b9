#include "wsim/weight.hh"

#include <cctype>
#include <ostream>

namespace wsim {

std::string kind_name(SemiringKind kind) {
    switch (kind) {
        case SemiringKind::PlusTimes: return "plus-times";
        case SemiringKind::MaxPlus: return "max-plus";
        case SemiringKind::Boolean: return "boolean";
    }
    throw Error("unreachable semiring kind");
}

SemiringKind kind_from_name(const std::string& name) {
    if (name == "plus-times") return SemiringKind::PlusTimes;
    if (name == "max-plus") return SemiringKind::MaxPlus;
    if (name == "boolean") return SemiringKind::Boolean;
    throw InputError("unknown semiring tag '" + name + "'");
}

Weight Weight::zero(SemiringKind kind) {
    if (kind == SemiringKind::MaxPlus) return minus_inf();
    return Weight(kind, false, mpq_class(0));
}

Weight Weight::one(SemiringKind kind) {
    if (kind == SemiringKind::MaxPlus) return Weight(kind, false, mpq_class(0));
    return Weight(kind, false, mpq_class(1));
}

Weight Weight::rational(SemiringKind kind, const mpq_class& value) {
    mpq_class v = value;
    v.canonicalize();
    switch (kind) {
        case SemiringKind::PlusTimes:
            if (v < 0) throw UsageError("plus-times weights must be nonnegative");
            break;
        case SemiringKind::MaxPlus:
            break;
        case SemiringKind::Boolean:
            if (v != 0 && v != 1) throw UsageError("Boolean weights must be 0 or 1");
            break;
    }
    return Weight(kind, false, v);
}

Weight Weight::minus_inf() {
    return Weight(SemiringKind::MaxPlus, true, mpq_class(0));
}

Weight Weight::boolean(bool bit) {
    return Weight(SemiringKind::Boolean, false, mpq_class(bit ? 1 : 0));
}

bool Weight::is_zero() const {
    if (kind_ == SemiringKind::MaxPlus) return minus_inf_;
    return value_ == 0;
}

bool Weight::is_one() const {
    if (minus_inf_) return false;
    if (kind_ == SemiringKind::MaxPlus) return value_ == 0;
    return value_ == 1;
}

const mpq_class& Weight::value() const {
    if (minus_inf_) throw UsageError("-inf has no finite value");
    return value_;
}

bool Weight::operator==(const Weight& other) const {
    if (kind_ != other.kind_) return false;
    if (minus_inf_ || other.minus_inf_) return minus_inf_ == other.minus_inf_;
    return value_ == other.value_;
}

namespace {

void require_same_kind(const Weight& a, const Weight& b) {
    if (a.kind() != b.kind())
        throw UsageError("semiring kind mismatch: " + kind_name(a.kind()) +
                         " vs " + kind_name(b.kind()));
}

}  // namespace

Weight sr_add(const Weight& a, const Weight& b) {
    require_same_kind(a, b);
    switch (a.kind()) {
        case SemiringKind::PlusTimes:
            return Weight::rational(a.kind(), a.value() + b.value());
        case SemiringKind::MaxPlus:
            if (a.is_minus_inf()) return b;
            if (b.is_minus_inf()) return a;
            return Weight::rational(a.kind(), a.value() >= b.value() ? a.value() : b.value());
        case SemiringKind::Boolean:
            return Weight::boolean(a.value() != 0 || b.value() != 0);
    }
    throw Error("unreachable");
}

Weight sr_mul(const Weight& a, const Weight& b) {
    require_same_kind(a, b);
    switch (a.kind()) {
        case SemiringKind::PlusTimes:
            return Weight::rational(a.kind(), a.value() * b.value());
        case SemiringKind::MaxPlus:
            // -inf absorbs: (-inf) + x = -inf for every x.
            if (a.is_minus_inf() || b.is_minus_inf()) return Weight::minus_inf();
            return Weight::rational(a.kind(), a.value() + b.value());
        case SemiringKind::Boolean:
            return Weight::boolean(a.value() != 0 && b.value() != 0);
    }
    throw Error("unreachable");
}

bool sr_leq(const Weight& a, const Weight& b) {
    require_same_kind(a, b);
    if (a.is_minus_inf()) return true;
    if (b.is_minus_inf()) return false;
    return a.value() <= b.value();
}

Weight parse_weight(SemiringKind kind, const std::string& text) {
    if (text.empty()) throw InputError("empty weight token");
    if (text == "-inf") {
        if (kind != SemiringKind::MaxPlus)
            throw InputError("-inf is only a " + kind_name(SemiringKind::MaxPlus) + " weight");
        return Weight::minus_inf();
    }
    if (text == "inf" || text == "+inf")
        throw InputError("+inf is not a representable weight");

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '-') {
        negative = true;
        ++pos;
    }
    auto read_digits = [&](const char* what) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw InputError(std::string("expected ") + what + " in weight '" + text + "'");
        return text.substr(start, pos - start);
    };
    std::string num = read_digits("an integer");
    std::string den = "1";
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = read_digits("a positive denominator");
    }
    if (pos != text.size()) throw InputError("malformed weight '" + text + "'");

    mpz_class den_z(den);
    if (den_z == 0) throw InputError("zero denominator in weight '" + text + "'");
    mpq_class q(mpz_class(num), den_z);
    q.canonicalize();
    if (negative) q = -q;

    switch (kind) {
        case SemiringKind::PlusTimes:
            if (q < 0) throw InputError("negative plus-times weight '" + text + "'");
            break;
        case SemiringKind::Boolean:
            if (q != 0 && q != 1) throw InputError("Boolean weight must be 0 or 1, got '" + text + "'");
            break;
        case SemiringKind::MaxPlus:
            break;
    }
    return Weight::rational(kind, q);
}

std::string format_weight(const Weight& w) {
    if (w.is_minus_inf()) return "-inf";
    return w.value().get_str();
}

std::ostream& operator<<(std::ostream& os, const Weight& w) {
    return os << format_weight(w);
}

}  // namespace wsim
