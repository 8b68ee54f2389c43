#pragma once

// Umbrella header for the whole library: the 1+1-dimensional Galilei group,
// its three coadjoint-orbit phase spaces, the two-body barycenter reduction,
// the randomized verification suite and the scenario/report serialization.

#include "galilei/common.hpp"
#include "galilei/group.hpp"
#include "galilei/io.hpp"
#include "galilei/orbits.hpp"
#include "galilei/twobody.hpp"
#include "galilei/verify.hpp"
