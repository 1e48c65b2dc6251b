#pragma once

#include "hsh4/error.hpp"
#include "hsh4/special_fn.hpp"
#include "hsh4/angular3.hpp"
#include "hsh4/harmonics.hpp"
#include "hsh4/coupling4.hpp"
#include "hsh4/multipole.hpp"
#include "hsh4/verify.hpp"
