#pragma once

#include "algebra.hpp"
#include "catalog.hpp"
#include "density.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "hnf.hpp"
#include "ideals.hpp"
#include "mirsky.hpp"
#include "numeric.hpp"
#include "report.hpp"
#include "sieve.hpp"
#include "sieve_json.hpp"
#include "window.hpp"
