#pragma once

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"
#include "ncfree/words.hpp"
#include "ncfree/ratexpr.hpp"
#include "ncfree/simple_set.hpp"
#include "ncfree/funcalc.hpp"
#include "ncfree/sqrtlib.hpp"
#include "ncfree/symbasis.hpp"
#include "ncfree/random.hpp"
#include "ncfree/report.hpp"
#include "ncfree/domains.hpp"
#include "ncfree/girard.hpp"
#include "ncfree/json_io.hpp"
#include "ncfree/parse.hpp"
#include "ncfree/verify.hpp"
