#ifndef CZL_CZL_HPP
#define CZL_CZL_HPP

#include "czl/error.hpp"
#include "czl/fft.hpp"
#include "czl/format.hpp"
#include "czl/gmres.hpp"
#include "czl/io.hpp"
#include "czl/kernel.hpp"
#include "czl/phase.hpp"
#include "czl/riemann.hpp"
#include "czl/solvability.hpp"
#include "czl/solver.hpp"
#include "czl/svg.hpp"
#include "czl/symbol.hpp"
#include "czl/verify.hpp"

#endif  // CZL_CZL_HPP
