#include <catch2/catch_amalgamated.hpp>
#include "uet/uet.hpp"
