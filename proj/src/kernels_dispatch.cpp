/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the pdolink authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdlib>
#include <cstring>

#include "pdolink/kernels.hpp"

namespace pdolink::kern {

namespace {

const Backend& select() {
  const char* req = std::getenv("PDOLINK_KERNELS");
  if (req != nullptr) {
    if (std::strcmp(req, "scalar") == 0) {
      return scalar_backend();
    }
    if (std::strcmp(req, "avx2") == 0) {
      return avx2_backend();
    }
  }
  return avx2_available() ? avx2_backend() : scalar_backend();
}

}  // namespace

const Backend& active() {
  static const Backend& chosen = select();
  return chosen;
}

}  // namespace pdolink::kern
