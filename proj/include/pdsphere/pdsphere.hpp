#ifndef PDSPHERE_PDSPHERE_HPP
#define PDSPHERE_PDSPHERE_HPP

#include "pdsphere/codebounds.hpp"
#include "pdsphere/constraints.hpp"
#include "pdsphere/gegenbauer.hpp"
#include "pdsphere/points.hpp"
#include "pdsphere/polynomial.hpp"
#include "pdsphere/quadrature.hpp"
#include "pdsphere/random.hpp"
#include "pdsphere/simplex.hpp"
#include "pdsphere/spherical.hpp"
#include "pdsphere/symlin.hpp"

#endif // PDSPHERE_PDSPHERE_HPP
