#pragma once

#include "hfsurgery/f2linalg.hpp"
#include "hfsurgery/chain.hpp"
#include "hfsurgery/knotsys.hpp"
#include "hfsurgery/lensmodel.hpp"
#include "hfsurgery/surgery.hpp"
