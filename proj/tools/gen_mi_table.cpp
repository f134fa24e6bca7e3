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

// Regenerates the shipped constrained-capacity MI tables. Slow (minutes);
// the output is committed so normal builds never need to run this.

#include <cstdio>

#include "pdolink/mi_table.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "mi_tables.txt";
  const pdolink::csi::MiTableSet tables =
      pdolink::csi::MiTableSet::generate(-20.0, 0.1, 601, 128);
  tables.save(path);
  std::printf("wrote %s\n", path);
  return 0;
}
