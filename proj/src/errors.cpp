// SPDX-License-Identifier: Apache-2.0
#include "hoc/errors.hpp"
