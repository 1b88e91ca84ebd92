#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bh/params.hpp"

TEST_CASE("default parameters are valid") {
    bh::ModelParams p;
    CHECK(bh::validate_params(p).empty());
}
