// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace mgv {

// One problem instance. gold_raw keeps the dataset's original answer text.
struct Task {
    std::string id;
    std::string question;
    double gold_answer = 0.0;
    std::string gold_raw;
};

} // namespace mgv
