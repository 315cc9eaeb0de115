#ifndef DBR_DBR_HPP
#define DBR_DBR_HPP

#include "dirichlet.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "operator.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "roots.hpp"
#include "space_spec.hpp"
#include "spectral.hpp"
#include "trig_poly.hpp"

#endif  // DBR_DBR_HPP
