// Umbrella header for the partinfo library.

#ifndef PARTINFO_PARTINFO_HPP
#define PARTINFO_PARTINFO_HPP

#include "partinfo/design.hpp"
#include "partinfo/eig.hpp"
#include "partinfo/errors.hpp"
#include "partinfo/experiments.hpp"
#include "partinfo/io.hpp"
#include "partinfo/matrix.hpp"
#include "partinfo/model.hpp"
#include "partinfo/montecarlo.hpp"
#include "partinfo/qfunc.hpp"
#include "partinfo/rng.hpp"
#include "partinfo/sampling.hpp"

#endif  // PARTINFO_PARTINFO_HPP
