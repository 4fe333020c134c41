// Copyright 2026 The ncdbr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ncdbr/char_function.hpp"
#include "ncdbr/colligation.hpp"
#include "ncdbr/fock.hpp"
#include "ncdbr/json_io.hpp"
#include "ncdbr/kernels.hpp"
#include "ncdbr/nc_space.hpp"
#include "ncdbr/numerics.hpp"
#include "ncdbr/poly.hpp"
#include "ncdbr/random.hpp"
#include "ncdbr/realization.hpp"
#include "ncdbr/row_contraction.hpp"
#include "ncdbr/sampler.hpp"
