#pragma once

#include "periodfn/criterion.hpp"
#include "periodfn/error.hpp"
#include "periodfn/gallery.hpp"
#include "periodfn/hamiltonian.hpp"
#include "periodfn/ode.hpp"
#include "periodfn/optimize.hpp"
#include "periodfn/period.hpp"
#include "periodfn/polyfamily.hpp"
#include "periodfn/polynomial.hpp"
#include "periodfn/quadrature.hpp"
#include "periodfn/roots.hpp"
#include "periodfn/smooth_function.hpp"
