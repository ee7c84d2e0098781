#pragma once

#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"
#include "bvtn/precision.hpp"
#include "bvtn/nodes.hpp"
#include "bvtn/bidiagonal.hpp"
#include "bvtn/algebra.hpp"
#include "bvtn/kernels.hpp"
#include "bvtn/spectral.hpp"
#include "bvtn/oracle.hpp"
#include "bvtn/io.hpp"
