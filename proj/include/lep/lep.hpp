#pragma once

#define LEP_VERSION "0.1.0"

#include "lep/cone.hpp"
#include "lep/errors.hpp"
#include "lep/exact_lp.hpp"
#include "lep/io.hpp"
#include "lep/lclep.hpp"
#include "lep/order.hpp"
#include "lep/psd.hpp"
#include "lep/rational.hpp"
#include "lep/runner.hpp"
#include "lep/sampler.hpp"
#include "lep/solve_psd.hpp"
