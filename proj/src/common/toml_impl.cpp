// Compiled implementation of the toml++ library.
#define TOML_IMPLEMENTATION
#include <toml.hpp>
