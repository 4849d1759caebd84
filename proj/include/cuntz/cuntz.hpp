#pragma once
/// Everything in one include.

#include "core.hpp"
#include "rational.hpp"
#include "ring.hpp"
#include "ring_checks.hpp"
#include "matrix.hpp"
#include "field.hpp"
#include "uniserial.hpp"
#include "subequiv.hpp"
#include "mvn.hpp"
#include "pom.hpp"
#include "pom_corpus.hpp"
#include "wr_monoid.hpp"
#include "cu_lattice.hpp"
#include "states.hpp"
#include "sequences.hpp"
#include "shift_algebra.hpp"
