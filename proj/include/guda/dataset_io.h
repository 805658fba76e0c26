// Copyright 2026 The GuDA Authors
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

#ifndef GUDA_DATASET_IO_H_
#define GUDA_DATASET_IO_H_

#include <iosfwd>
#include <span>
#include <string>

#include "guda/core_data.h"

namespace guda {

// JSON Lines dataset format.
//
// Line 1 is a header object {"header": {...}} carrying the metadata. Each
// following line is one episode:
//   {"task": str, "states": [[...]], "actions": [[...]],
//    "rewards": [...], "terminals": [...]}
// `states` holds k + 1 rows for k transitions: row i is the state of
// transition i and row i + 1 its next state. Reals are written with 17
// significant digits so reading back reproduces every bit.
void WriteDataset(std::ostream& out, const Dataset& dataset);
void WriteDatasetFile(const std::string& path, const Dataset& dataset);

Dataset ReadDataset(std::istream& in);
Dataset ReadDatasetFile(const std::string& path);

// 17-significant-digit JSON real that parses back to exactly `value`;
// throws NumericError for NaN or infinity.
std::string FormatReal(double value);
void AppendRealArray(std::string& out, std::span<const double> values);

}  // namespace guda

#endif  // GUDA_DATASET_IO_H_
