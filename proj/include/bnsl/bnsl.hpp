// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_BNSL_HPP
#define BNSL_BNSL_HPP

#include "bnsl/asymptotics.hpp"
#include "bnsl/common.hpp"
#include "bnsl/experiment.hpp"
#include "bnsl/io.hpp"
#include "bnsl/sampler.hpp"
#include "bnsl/scoring.hpp"
#include "bnsl/search.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

#endif  // BNSL_BNSL_HPP
