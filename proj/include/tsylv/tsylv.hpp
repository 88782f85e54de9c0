#pragma once

// Dense direct solvers for Sylvester-type tensor equations
//
//   Kronecker-sum form:   sum_m X x_m A_m = B
//   two-term form:        X x_0 A_0 + X x_0 C x_1 A_1 ... x_{d-1} A_{d-1} = B
//
// via Schur reduction and recursive blocking, with optional mode merging.

#include "tsylv/bench.hpp"
#include "tsylv/blas.hpp"
#include "tsylv/config.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/gsylv.hpp"
#include "tsylv/io.hpp"
#include "tsylv/kernels.hpp"
#include "tsylv/laplace.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/random.hpp"
#include "tsylv/scalar.hpp"
#include "tsylv/solvability.hpp"
#include "tsylv/sylvester.hpp"
#include "tsylv/tensor.hpp"
