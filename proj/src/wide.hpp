#pragma once

// Extended-precision scalar for the shooting kernel. Resonant boundary data at
// |alpha| ~ 200 cancel ~12 digits, which double cannot absorb.
namespace deltaprime::detail {

using Wide = __float128;

inline Wide wabs(Wide x) { return x < 0 ? -x : x; }

}  // namespace deltaprime::detail
