// Copyright 2026 The DDS Authors.
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

// Umbrella header.
#pragma once

#include "dds/deconv.hpp"
#include "dds/fft.hpp"
#include "dds/image.hpp"
#include "dds/io.hpp"
#include "dds/metrics.hpp"
#include "dds/patterns.hpp"
#include "dds/pipeline.hpp"
#include "dds/psf.hpp"
#include "dds/scanner.hpp"
