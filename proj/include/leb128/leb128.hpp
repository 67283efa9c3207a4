// Copyright 2025 The leb128-bulk Authors
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

#include "leb128/bench.hpp"
#include "leb128/bulk_decode.hpp"
#include "leb128/case_table.hpp"
#include "leb128/errors.hpp"
#include "leb128/pext.hpp"
#include "leb128/varint.hpp"
#include "leb128/workload.hpp"
