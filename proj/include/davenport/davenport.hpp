#pragma once

#include "davenport/bounds.hpp"
#include "davenport/brute_force.hpp"
#include "davenport/certificate.hpp"
#include "davenport/constructions.hpp"
#include "davenport/decomposition.hpp"
#include "davenport/error.hpp"
#include "davenport/group.hpp"
#include "davenport/integer.hpp"
#include "davenport/report.hpp"
#include "davenport/search.hpp"
#include "davenport/sumset.hpp"
#include "davenport/weights.hpp"
