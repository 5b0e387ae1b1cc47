#pragma once

#include "extcoop/classify.hpp"
#include "extcoop/errors.hpp"
#include "extcoop/io.hpp"
#include "extcoop/jacobian.hpp"
#include "extcoop/network.hpp"
#include "extcoop/rates.hpp"
#include "extcoop/report.hpp"
#include "extcoop/simulate.hpp"
#include "extcoop/transform.hpp"

namespace extcoop {
inline constexpr const char* kVersion = "0.1.0";
}
