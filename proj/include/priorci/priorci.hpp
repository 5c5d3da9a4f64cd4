#ifndef PRIORCI_PRIORCI_HPP
#define PRIORCI_PRIORCI_HPP

#include "priorci/config.hpp"
#include "priorci/interval.hpp"
#include "priorci/io.hpp"
#include "priorci/known_variance.hpp"
#include "priorci/mc.hpp"
#include "priorci/numeric_optim.hpp"
#include "priorci/parallel.hpp"
#include "priorci/quadrature.hpp"
#include "priorci/root_finding.hpp"
#include "priorci/special_functions.hpp"
#include "priorci/spline.hpp"
#include "priorci/unknown_variance.hpp"

#endif
