#pragma once

#include "bkmod/classify.hpp"
#include "bkmod/cohom.hpp"
#include "bkmod/errors.hpp"
#include "bkmod/factor.hpp"
#include "bkmod/field.hpp"
#include "bkmod/indres.hpp"
#include "bkmod/lattice.hpp"
#include "bkmod/linalg.hpp"
#include "bkmod/matrix.hpp"
#include "bkmod/module.hpp"
#include "bkmod/qpcase.hpp"
#include "bkmod/search.hpp"
#include "bkmod/series.hpp"
#include "bkmod/subspaces.hpp"
