#pragma once

#include "sierpinski/address.hpp"
#include "sierpinski/cross_check.hpp"
#include "sierpinski/dense_oracle.hpp"
#include "sierpinski/energy_harmonic.hpp"
#include "sierpinski/errors.hpp"
#include "sierpinski/fractal_graph.hpp"
#include "sierpinski/measure_laplacian.hpp"
#include "sierpinski/numerics.hpp"
#include "sierpinski/spectral_decimation.hpp"
#include "sierpinski/vertex_function.hpp"
