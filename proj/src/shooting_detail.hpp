#pragma once

#include "deltaprime/shooting.hpp"
#include "wide.hpp"

namespace deltaprime::detail {

struct WideData {
  Wide u1 = 0;
  Wide du1 = 0;
  Wide v1 = 0;
  Wide dv1 = 0;
};

WideData shoot_wide(const PotentialProfile& profile, Wide alpha, Wide kappa2,
                    const ShootOptions& opts);

FundamentalData narrow(const WideData& d);

}  // namespace deltaprime::detail
