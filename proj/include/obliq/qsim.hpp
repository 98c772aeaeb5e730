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

#ifndef OBLIQ_QSIM_HPP
#define OBLIQ_QSIM_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "obliq/rng.hpp"

namespace obliq {

using Complex = std::complex<double>;
using Gate1 = Eigen::Matrix2cd;

/// Opaque qubit identifier. Handles are never reused within one register.
struct QubitHandle {
    std::uint32_t id = 0;
    friend bool operator==(QubitHandle, QubitHandle) = default;
    friend auto operator<=>(QubitHandle, QubitHandle) = default;
};

class CapacityExceeded : public std::runtime_error {
  public:
    CapacityExceeded(std::size_t requested, std::size_t limit);
    std::size_t limit() const { return limit_; }

  private:
    std::size_t limit_;
};

/// Live-qubit cap: `OBLIQ_MAX_QUBITS` if set, otherwise 22.
std::size_t default_max_qubits();

inline constexpr std::size_t kDefaultMaxQubits = 22;

/// Square density matrix over k qubits. Index bit order: the first qubit of
/// the subset it was taken from is the most significant bit.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(Eigen::MatrixXcd m);

    static DensityMatrix pure(std::span<const Complex> amplitudes);
    static DensityMatrix maximally_mixed(std::size_t qubits);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t qubits() const;
    const Eigen::MatrixXcd& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    /// Throws std::logic_error if Hermiticity, unit trace, or positivity fails.
    void check_invariants(double tol = 1e-12, double psd_tol = 1e-10) const;

  private:
    Eigen::MatrixXcd m_;
};

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Dense statevector over a growable set of live qubits.
///
/// Bit i of an amplitude index belongs to the i-th live qubit in allocation
/// order. Measured qubits are released and their slot is removed, so the
/// dimension always equals 2^live_count().
class StateRegister {
  public:
    explicit StateRegister(std::size_t max_live = default_max_qubits());

    std::size_t live_count() const { return live_.size(); }
    std::size_t max_live() const { return max_live_; }
    std::size_t peak_live() const { return peak_live_; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<const QubitHandle> live_qubits() const { return live_; }
    bool is_live(QubitHandle q) const;

    std::vector<QubitHandle> alloc_zero(std::size_t count);
    std::pair<QubitHandle, QubitHandle> alloc_bell_pair();
    /// Tensor in a new block of qubits prepared in `amplitudes`, whose index
    /// uses the first returned handle as the most significant bit.
    std::vector<QubitHandle> alloc_state(std::span<const Complex> amplitudes);

    void apply_1q(QubitHandle q, const Gate1& gate);
    void apply_cz(QubitHandle q1, QubitHandle q2, int power = 1);

    /// Probabilities of Bell outcomes (a,b) for the basis (X^a Z^b (x) I)|Phi>,
    /// ordered (0,0),(0,1),(1,0),(1,1).
    std::array<double, 4> bell_probabilities(QubitHandle q1, QubitHandle q2) const;
    /// Collapse onto |Phi_{a,b}> and release both qubits. Returns the branch
    /// probability; throws if it is zero.
    double bell_project(QubitHandle q1, QubitHandle q2, int a, int b);

    struct BellResult {
        int a = 0;
        int b = 0;
        std::array<double, 4> branch_probs{};
    };
    BellResult bell_measure(QubitHandle q1, QubitHandle q2, Rng& rng);

    double probability_of_one(QubitHandle q) const;
    /// Collapse onto |bit> and release q. Returns the probability of `bit`.
    double project_z(QubitHandle q, int bit);

    struct ZResult {
        int bit = 0;
        double prob = 0.0;
    };
    ZResult measure_z(QubitHandle q, Rng& rng);

    DensityMatrix density_on(std::span<const QubitHandle> subset) const;
    /// Amplitudes when `order` covers every live qubit; order[0] is the MSB.
    std::vector<Complex> amplitudes_in(std::span<const QubitHandle> order) const;

    double norm_squared() const;
    std::span<const Complex> raw_amplitudes() const { return amps_; }

  private:
    std::size_t position(QubitHandle q) const;
    void require_capacity(std::size_t extra) const;
    void release_positions(std::size_t p1, int v1);

    std::vector<Complex> amps_{Complex{1.0, 0.0}};
    std::vector<QubitHandle> live_;
    std::uint32_t next_id_ = 0;
    std::size_t max_live_;
    std::size_t peak_live_ = 0;
};

bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-12);

}  // namespace obliq

#endif  // OBLIQ_QSIM_HPP
