#include "cocycle_lab/errors.hpp"
