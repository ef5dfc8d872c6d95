// SPDX-License-Identifier: MIT
// tests/doctest_main.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
