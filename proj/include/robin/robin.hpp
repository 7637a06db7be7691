#pragma once

#include "robin/candidates.hpp"
#include "robin/chebyshev.hpp"
#include "robin/criterion.hpp"
#include "robin/factorization.hpp"
#include "robin/interval.hpp"
#include "robin/rational.hpp"
#include "robin/report_io.hpp"
#include "robin/sieve.hpp"
#include "robin/stationarity.hpp"
