#pragma once

#include "qdomino/config.hpp"
#include "qdomino/couplings.hpp"
#include "qdomino/dynamics.hpp"
#include "qdomino/error.hpp"
#include "qdomino/experiments.hpp"
#include "qdomino/hamiltonians.hpp"
#include "qdomino/operators.hpp"
#include "qdomino/output.hpp"
