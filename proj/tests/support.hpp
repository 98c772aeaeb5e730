// Copyright 2026 The obliq Authors
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

#ifndef OBLIQ_TESTS_SUPPORT_HPP
#define OBLIQ_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "obliq/qsim.hpp"

namespace obliq::testing {

inline std::vector<Complex> random_state(std::size_t n, std::mt19937_64& eng) {
    std::normal_distribution<double> g;
    std::vector<Complex> psi(std::size_t{1} << n);
    double norm = 0;
    for (auto& c : psi) {
        c = {g(eng), g(eng)};
        norm += std::norm(c);
    }
    for (auto& c : psi) c /= std::sqrt(norm);
    return psi;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace obliq::testing

#endif  // OBLIQ_TESTS_SUPPORT_HPP
