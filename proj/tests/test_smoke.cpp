#include <doctest.h>

#include "scorecast/rng.hpp"

TEST_CASE("rng produces values") {
    scorecast::Rng rng(1);
    CHECK(rng.uniform() >= 0.0);
    CHECK(rng.uniform() < 1.0);
}
