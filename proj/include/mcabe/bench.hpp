// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

#include "mcabe/core.hpp"

namespace mcabe {

// Wall-clock cost of one operation at one attribute count, with the 95%
// confidence interval under the normal approximation.
struct BenchResult {
  std::string operation;
  int attr_count = 0;
  std::vector<double> samples_ms;
  double mean_ms = 0;
  double ci_low_ms = 0;
  double ci_high_ms = 0;
};

enum class BenchOp {
  EncryptDo,
  EncryptEsp,
  Keygen,
  DecryptDsp,
  DecryptDr,
  Revoke,
};

const char* bench_op_name(BenchOp op);
std::optional<BenchOp> bench_op_from_name(std::string_view name);

BenchResult summarize(std::string operation, int attr_count, std::vector<double> samples_ms);

// Times keygen with |S| = n for each n. Warm-up iterations are excluded.
std::vector<BenchResult> bench_keygen(const PublicKey& pk, const MasterKey& mk,
                                      std::span<const int> attr_counts, int samples,
                                      RandomSource& rng);

// Full suite over any subset of operations. For Revoke the count axis is the
// registered-DR population size rather than an attribute count.
std::vector<BenchResult> bench_suite(std::span<const BenchOp> ops, std::span<const int> attr_counts,
                                     int samples, RandomSource& rng);

// operation,attr_count,mean_ms,ci_low_ms,ci_high_ms,samples
void write_csv(std::ostream& out, std::span<const BenchResult> results);

// gnuplot-friendly: whitespace-separated columns, one block per operation.
void write_gnuplot(std::ostream& out, std::span<const BenchResult> results);

// Least-squares fit of mean_ms against attr_count; returns R^2.
double linear_fit_r2(std::span<const BenchResult> results);

// Slope of the same fit, in ms per attribute.
double linear_fit_slope(std::span<const BenchResult> results);

}  // namespace mcabe
