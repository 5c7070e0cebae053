#pragma once

#include "adversary.hpp"
#include "certificate.hpp"
#include "core.hpp"
#include "fractional.hpp"
#include "generators.hpp"
#include "harness.hpp"
#include "instance.hpp"
#include "numerics.hpp"
#include "offline.hpp"
#include "policies.hpp"
#include "rng.hpp"
#include "simplex.hpp"
#include "trace.hpp"
