/* Copyright 2026 The plap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plap {

/// Small dense vector/matrix types. Dimensions are runtime (2 or 3) but the
/// storage is inline, so pointwise kernels never touch the heap.
inline constexpr int kMaxDim = 3;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline void require(bool cond, const std::string& msg)
{
  if (!cond) throw std::invalid_argument(msg);
}

inline void require_dim(const Vec& v, int dim, const char* where)
{
  if (v.size() != dim) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (expected " +
                                std::to_string(dim) + ", got " + std::to_string(v.size()) + ")");
  }
}

}  // namespace plap
