#pragma once

#include "innerclt/blaschke.hpp"
#include "innerclt/clark.hpp"
#include "innerclt/clt.hpp"
#include "innerclt/coefficients.hpp"
#include "innerclt/correlations.hpp"
#include "innerclt/errors.hpp"
#include "innerclt/io.hpp"
#include "innerclt/quadrature.hpp"
#include "innerclt/rng.hpp"
#include "innerclt/variance.hpp"
