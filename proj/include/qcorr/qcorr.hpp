#pragma once

// Umbrella header for the qcorr library.

#include "qcorr/complex_matrix.hpp"
#include "qcorr/eig.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/format.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/minimize.hpp"
#include "qcorr/report.hpp"
#include "qcorr/states.hpp"
#include "qcorr/sweep.hpp"
#include "qcorr/version.hpp"
