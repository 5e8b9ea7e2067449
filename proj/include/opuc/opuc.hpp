#pragma once

#include "opuc/analytic.hpp"
#include "opuc/common.hpp"
#include "opuc/errors.hpp"
#include "opuc/fft.hpp"
#include "opuc/json_io.hpp"
#include "opuc/measure.hpp"
#include "opuc/poly.hpp"
#include "opuc/relative.hpp"
#include "opuc/rng.hpp"
#include "opuc/transfer.hpp"
#include "opuc/verblunsky.hpp"
