#include <doctest.h>
#include <willcop/willcop.hpp>
