#pragma once

#include "burgers_ip/errors.hpp"
#include "burgers_ip/flow.hpp"
#include "burgers_ip/godunov.hpp"
#include "burgers_ip/inflation.hpp"
#include "burgers_ip/norms.hpp"
#include "burgers_ip/peakon.hpp"
#include "burgers_ip/quadrature.hpp"
