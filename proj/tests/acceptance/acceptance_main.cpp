// SPDX-License-Identifier: Apache-2.0
//
// nfrsma: hybrid beamfocusing for rate-splitting near-field downlinks
// Copyright (C) 2026 The nfrsma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "criteria.hpp"

#include <cstdlib>
#include <iostream>

// Usage: acceptance [id ...]   (no ids runs all criteria)
int main(int argc, char **argv)
{
    using namespace nfrsma::acceptance;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));

    int failed = 0;
    for (const auto &c : all_criteria())
    {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        const Outcome o = run_timed(c);
        std::cout << format(o) << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
