#pragma once

#include <optional>

#include "canardkit/algebra/gcd.hpp"
#include "canardkit/fcm/lie.hpp"

namespace canardkit {

struct DarbouxReport {
    std::optional<Polynomial> cofactor;
    Polynomial remainder;
    bool exact = false;
};

/// Divides L_V phi by phi; a zero remainder makes the quotient the cofactor.
inline DarbouxReport darboux_check(const Polynomial& phi, const VectorField& v) {
    if (phi.is_zero()) throw Error(ErrorCode::InvalidArgument, "darboux_check needs a nonzero polynomial");
    const auto [quotient, remainder] = divide(lie_derivative(phi, v), phi);
    DarbouxReport r;
    r.remainder = remainder;
    r.exact = remainder.is_zero();
    if (r.exact) r.cofactor = quotient;
    return r;
}

inline DarbouxReport darboux_check(const Polynomial& phi, const SPSystem& s) { return darboux_check(phi, fast_time_field(s)); }

} // namespace canardkit
