#pragma once

#include "fracsh/convergence.hpp"
#include "fracsh/errors.hpp"
#include "fracsh/etdrk4.hpp"
#include "fracsh/fft.hpp"
#include "fracsh/gl.hpp"
#include "fracsh/grid.hpp"
#include "fracsh/parallel.hpp"
#include "fracsh/properties.hpp"
#include "fracsh/quadrature.hpp"
#include "fracsh/residuum.hpp"
#include "fracsh/sh.hpp"
#include "fracsh/spectral_field.hpp"
#include "fracsh/study.hpp"
#include "fracsh/symbols.hpp"
