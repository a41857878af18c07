#pragma once

#include "slicefn/cayley_dickson.hpp"
#include "slicefn/error.hpp"
#include "slicefn/expression.hpp"
#include "slicefn/io.hpp"
#include "slicefn/modulus.hpp"
#include "slicefn/random.hpp"
#include "slicefn/reciprocal.hpp"
#include "slicefn/scalar.hpp"
#include "slicefn/singularities.hpp"
#include "slicefn/slice_rep.hpp"
#include "slicefn/star_poly.hpp"
#include "slicefn/stem.hpp"
#include "slicefn/zeros.hpp"
