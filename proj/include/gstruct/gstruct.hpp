#pragma once

#include "gstruct/catalog.hpp"
#include "gstruct/chart.hpp"
#include "gstruct/chernweil.hpp"
#include "gstruct/forms.hpp"
#include "gstruct/gstructure.hpp"
#include "gstruct/invariants.hpp"
#include "gstruct/jet.hpp"
#include "gstruct/liealg.hpp"
#include "gstruct/multilinear.hpp"
