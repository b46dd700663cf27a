#pragma once

// Umbrella include for the whole library.

#include "sievebound/ap.hpp"
#include "sievebound/basis.hpp"
#include "sievebound/bounds.hpp"
#include "sievebound/config.hpp"
#include "sievebound/factor.hpp"
#include "sievebound/integer.hpp"
#include "sievebound/jsonw.hpp"
#include "sievebound/logvalue.hpp"
#include "sievebound/parallel.hpp"
#include "sievebound/primes.hpp"
#include "sievebound/residue.hpp"
#include "sievebound/sieve_bounds.hpp"
#include "sievebound/sift.hpp"
#include "sievebound/sigma_table.hpp"
#include "sievebound/special.hpp"
