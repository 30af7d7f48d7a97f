#pragma once

#include "mandelq/closed_forms.hpp"
#include "mandelq/density_io.hpp"
#include "mandelq/errors.hpp"
#include "mandelq/fock.hpp"
#include "mandelq/minimizer.hpp"
#include "mandelq/moments.hpp"
#include "mandelq/types.hpp"
#include "mandelq/version.hpp"
