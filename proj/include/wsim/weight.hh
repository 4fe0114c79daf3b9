#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "wsim/errors.hh"

namespace wsim {

enum class SemiringKind { PlusTimes, MaxPlus, Boolean };

std::string kind_name(SemiringKind kind);
SemiringKind kind_from_name(const std::string& name);

/// One element of a semiring.  Values are exact: nonnegative rationals for
/// plus-times, rationals extended with -inf for max-plus, bits for Boolean.
/// +inf is not representable in any of the three semirings; finite automata
/// never produce it.
class Weight {
public:
    static Weight zero(SemiringKind kind);
    static Weight one(SemiringKind kind);
    static Weight rational(SemiringKind kind, const mpq_class& value);
    static Weight minus_inf();
    static Weight boolean(bool bit);

    SemiringKind kind() const { return kind_; }
    bool is_minus_inf() const { return minus_inf_; }
    bool is_zero() const;
    bool is_one() const;

    /// Finite numeric value; UsageError when the weight is -inf.
    const mpq_class& value() const;

    bool operator==(const Weight& other) const;
    bool operator!=(const Weight& other) const { return !(*this == other); }

private:
    Weight(SemiringKind kind, bool minus_inf, mpq_class value)
        : kind_(kind), minus_inf_(minus_inf), value_(std::move(value)) {}

    SemiringKind kind_;
    bool minus_inf_;
    mpq_class value_;
};

Weight sr_add(const Weight& a, const Weight& b);
Weight sr_mul(const Weight& a, const Weight& b);
bool sr_leq(const Weight& a, const Weight& b);

/// Weight grammar: INT | INT "/" POSINT | "-inf" (max-plus only); a leading
/// '-' on rationals is accepted for max-plus only.
Weight parse_weight(SemiringKind kind, const std::string& text);
std::string format_weight(const Weight& w);

std::ostream& operator<<(std::ostream& os, const Weight& w);

}  // namespace wsim
