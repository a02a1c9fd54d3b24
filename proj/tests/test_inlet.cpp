#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nozzleflow/inlet.hpp"

using namespace nozzleflow;

TEST_CASE("constant profile validates") {
    const InletProfile prof = constant_profile(1.0, 1.0, 2.0);
    CHECK(validate_inlet(prof).pass);
}
