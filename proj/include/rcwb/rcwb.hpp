#pragma once

#include "rcwb/ah_system.hpp"
#include "rcwb/bundles.hpp"
#include "rcwb/certificate_verify.hpp"
#include "rcwb/certificates.hpp"
#include "rcwb/error.hpp"
#include "rcwb/matrix_model.hpp"
#include "rcwb/numeric.hpp"
#include "rcwb/sequences.hpp"
#include "rcwb/serialize.hpp"
#include "rcwb/traces.hpp"
