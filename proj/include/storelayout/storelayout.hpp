#pragma once

#include "storelayout/linearizer.hpp"
#include "storelayout/qap_io.hpp"
#include "storelayout/report.hpp"
#include "storelayout/solvers/hierarchical.hpp"
