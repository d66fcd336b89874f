//
// Copyright 2026 The ldiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Umbrella header.

#ifndef LDIV_LDIV_HPP_
#define LDIV_LDIV_HPP_

#include "ldiv/baseline.hpp"
#include "ldiv/count_buckets.hpp"
#include "ldiv/error.hpp"
#include "ldiv/gadget.hpp"
#include "ldiv/hilbert.hpp"
#include "ldiv/job.hpp"
#include "ldiv/metrics.hpp"
#include "ldiv/model.hpp"
#include "ldiv/optimal.hpp"
#include "ldiv/synthetic.hpp"
#include "ldiv/tp.hpp"

#endif  // LDIV_LDIV_HPP_
