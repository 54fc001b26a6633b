#pragma once

#include "curv4/types.hpp"
#include "curv4/tensor.hpp"
#include "curv4/hodge.hpp"
#include "curv4/quaternion.hpp"
#include "curv4/families.hpp"
#include "curv4/classify.hpp"
