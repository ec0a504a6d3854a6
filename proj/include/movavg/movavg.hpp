#pragma once

#include "movavg/circulant.hpp"
#include "movavg/companion.hpp"
#include "movavg/convex.hpp"
#include "movavg/errors.hpp"
#include "movavg/gauss_seidel.hpp"
#include "movavg/kolmogorov.hpp"
#include "movavg/matrix.hpp"
#include "movavg/matrix_means.hpp"
#include "movavg/piecewise_quadratic.hpp"
#include "movavg/rational.hpp"
#include "movavg/recurrence.hpp"
#include "movavg/spectral.hpp"
#include "movavg/weights.hpp"
