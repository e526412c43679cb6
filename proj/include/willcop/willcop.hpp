#pragma once

#include "approx.hpp"
#include "base.hpp"
#include "bundled.hpp"
#include "cantor.hpp"
#include "copula.hpp"
#include "decomposition.hpp"
#include "generator.hpp"
#include "io.hpp"
#include "lab.hpp"
#include "measure.hpp"
#include "metrics.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "stats.hpp"
#include "verify.hpp"
