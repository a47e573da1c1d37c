#pragma once

#include "cstar/errors.hpp"
#include "cstar/tolerances.hpp"
#include "cstar/rng.hpp"
#include "cstar/dense.hpp"
#include "cstar/algebra.hpp"
#include "cstar/module.hpp"
#include "cstar/operator.hpp"
#include "cstar/frame.hpp"
#include "cstar/multiplier.hpp"
#include "cstar/generators.hpp"
#include "cstar/certificate.hpp"
#include "cstar/suite.hpp"
#include "cstar/serialize.hpp"
#include "cstar/crosscheck.hpp"
#include "cstar/scenario.hpp"
