#pragma once

#include "bounds.hpp"
#include "distribution.hpp"
#include "energy.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "sampler.hpp"
#include "subset_dp.hpp"
#include "variance.hpp"
