#pragma once

#include "extbloch/branchlog.hpp"

#include <cstdint>
#include <iosfwd>

namespace extbloch {

using Int = std::int64_t;

/// A point (z;p,q) of the Z x Z cover of C - {0,1}.
///
/// Real shapes outside (0,1) sit on one of the split rays and must record
/// the half-plane they belong to; for non-real z the side is always `none`.
struct ExtParam {
    cplx z{0.5, 0.0};
    Int p = 0;
    Int q = 0;
    Side side = Side::none;

    ExtParam() = default;
    /// Throws DomainError if z is 0 or 1, or if a real z outside (0,1) has no side.
    ExtParam(cplx z, Int p, Int q, Side side = Side::none);

    /// log z with the branch fixed by the side flag.
    [[nodiscard]] cplx log_z() const;
    /// log(1-z) with the branch fixed by the side flag.
    [[nodiscard]] cplx log_one_minus_z() const;

    [[nodiscard]] bool is_real() const { return z.imag() == 0.0; }

    friend bool operator==(const ExtParam&, const ExtParam&) = default;
};

std::ostream& operator<<(std::ostream& os, const ExtParam& x);

/// Side of a shape, or the side a real shape inherits when approached from `hint`.
Side side_for(cplx z, Side hint);

/// R(z;p,q) = Rogers(z) + (pi i / 2)(p log(1-z) + q log z) - pi^2/6, not reduced.
cplx r_value(const ExtParam& param);

} // namespace extbloch
