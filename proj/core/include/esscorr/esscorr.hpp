#pragma once

#include "esscorr/csv.hpp"
#include "esscorr/detector.hpp"
#include "esscorr/error.hpp"
#include "esscorr/fock.hpp"
#include "esscorr/mgf.hpp"
#include "esscorr/nonclassicality.hpp"
#include "esscorr/reconstruct.hpp"
#include "esscorr/state_json.hpp"
#include "esscorr/tolerances.hpp"
