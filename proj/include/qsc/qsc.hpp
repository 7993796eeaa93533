#pragma once

#include "qsc/atomic_write.hpp"
#include "qsc/check.hpp"
#include "qsc/criteria.hpp"
#include "qsc/dutchbook.hpp"
#include "qsc/error.hpp"
#include "qsc/io.hpp"
#include "qsc/linalg.hpp"
#include "qsc/measurement.hpp"
#include "qsc/oracle.hpp"
#include "qsc/povm.hpp"
#include "qsc/pp.hpp"
#include "qsc/pp3.hpp"
#include "qsc/random.hpp"
#include "qsc/report.hpp"
#include "qsc/states.hpp"
#include "qsc/verdict.hpp"
#include "qsc/witness_check.hpp"
