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

#include "obliq/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace obliq {

namespace {

std::size_t insert_zero_bit(std::size_t r, std::size_t p) {
    const std::size_t low = r & ((std::size_t{1} << p) - 1);
    return ((r >> p) << (p + 1)) | low;
}

}  // namespace

CapacityExceeded::CapacityExceeded(std::size_t requested, std::size_t limit)
    : std::runtime_error("qubit capacity exceeded: " + std::to_string(requested) +
                         " live qubits requested, limit is " + std::to_string(limit) +
                         " (set OBLIQ_MAX_QUBITS to raise it)"),
      limit_(limit) {}

std::size_t default_max_qubits() {
    if (const char* env = std::getenv("OBLIQ_MAX_QUBITS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 40) return v;
    }
    return kDefaultMaxQubits;
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw std::invalid_argument("density matrix must be square and non-empty");
    }
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> amplitudes) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amplitudes.size()));
    for (std::size_t i = 0; i < amplitudes.size(); ++i) v(static_cast<Eigen::Index>(i)) = amplitudes[i];
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t qubits) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << qubits);
    return DensityMatrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

std::size_t DensityMatrix::qubits() const {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < dim()) ++k;
    return k;
}

void DensityMatrix::check_invariants(double tol, double psd_tol) const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw std::logic_error("density matrix is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex{1.0, 0.0}) > tol) {
        throw std::logic_error("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol) {
        throw std::logic_error("density matrix is not positive semidefinite");
    }
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        std::ostringstream os;
        os << "trace_distance: dimension mismatch (" << rho.dim() << " vs " << sigma.dim() << ")";
        throw std::invalid_argument(os.str());
    }
    const Eigen::MatrixXcd diff = rho.matrix() - sigma.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// StateRegister

StateRegister::StateRegister(std::size_t max_live) : max_live_(max_live) {}

bool StateRegister::is_live(QubitHandle q) const {
    return std::find(live_.begin(), live_.end(), q) != live_.end();
}

std::size_t StateRegister::position(QubitHandle q) const {
    const auto it = std::find(live_.begin(), live_.end(), q);
    if (it == live_.end()) {
        throw std::invalid_argument("qubit " + std::to_string(q.id) + " is not live");
    }
    return static_cast<std::size_t>(it - live_.begin());
}

void StateRegister::require_capacity(std::size_t extra) const {
    if (live_.size() + extra > max_live_) throw CapacityExceeded(live_.size() + extra, max_live_);
}

std::vector<QubitHandle> StateRegister::alloc_zero(std::size_t count) {
    if (count == 0) throw std::invalid_argument("alloc_zero: count must be at least 1");
    require_capacity(count);
    // New qubits take the high bits, so the old amplitudes keep their indices.
    amps_.resize(amps_.size() << count, Complex{0.0, 0.0});
    std::vector<QubitHandle> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(QubitHandle{next_id_++});
        live_.push_back(out.back());
    }
    peak_live_ = std::max(peak_live_, live_.size());
    return out;
}

std::pair<QubitHandle, QubitHandle> StateRegister::alloc_bell_pair() {
    static const double r = 1.0 / std::sqrt(2.0);
    const std::array<Complex, 4> phi{r, 0.0, 0.0, r};
    const auto h = alloc_state(phi);
    return {h[0], h[1]};
}

std::vector<QubitHandle> StateRegister::alloc_state(std::span<const Complex> amplitudes) {
    std::size_t c = 0;
    while ((std::size_t{1} << c) < amplitudes.size()) ++c;
    if (c == 0 || (std::size_t{1} << c) != amplitudes.size()) {
        throw std::invalid_argument("alloc_state: amplitude count must be a power of two >= 2");
    }
    double norm = 0.0;
    for (const auto& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("alloc_state: state is not normalized");
    require_capacity(c);

    const std::size_t k = live_.size();
    const std::size_t old_dim = amps_.size();
    std::vector<Complex> next(old_dim << c);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        // amplitude index i has the first new handle as MSB; it lives at bit k.
        std::size_t hi = 0;
        for (std::size_t t = 0; t < c; ++t) {
            if ((i >> (c - 1 - t)) & 1U) hi |= std::size_t{1} << t;
        }
        const Complex a = amplitudes[i];
        for (std::size_t r = 0; r < old_dim; ++r) next[(hi << k) | r] = amps_[r] * a;
    }
    amps_ = std::move(next);
    std::vector<QubitHandle> out;
    for (std::size_t t = 0; t < c; ++t) {
        out.push_back(QubitHandle{next_id_++});
        live_.push_back(out.back());
    }
    peak_live_ = std::max(peak_live_, live_.size());
    return out;
}

void StateRegister::apply_1q(QubitHandle q, const Gate1& gate) {
    if (!is_unitary(gate)) throw std::invalid_argument("apply_1q: gate is not unitary");
    const std::size_t p = position(q);
    const std::size_t step = std::size_t{1} << p;
    const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    for (std::size_t base = 0; base < amps_.size(); base += 2 * step) {
        for (std::size_t j = 0; j < step; ++j) {
            Complex& a0 = amps_[base + j];
            Complex& a1 = amps_[base + j + step];
            const Complex v0 = a0, v1 = a1;
            a0 = g00 * v0 + g01 * v1;
            a1 = g10 * v0 + g11 * v1;
        }
    }
}

void StateRegister::apply_cz(QubitHandle q1, QubitHandle q2, int power) {
    if (q1 == q2) throw std::invalid_argument("apply_cz: control and target must differ");
    const std::size_t p1 = position(q1), p2 = position(q2);
    if ((power % 2 + 2) % 2 == 0) return;
    const std::size_t mask = (std::size_t{1} << p1) | (std::size_t{1} << p2);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if ((i & mask) == mask) amps_[i] = -amps_[i];
    }
}

std::array<double, 4> StateRegister::bell_probabilities(QubitHandle q1, QubitHandle q2) const {
    if (q1 == q2) throw std::invalid_argument("bell measurement needs two distinct qubits");
    const std::size_t p1 = position(q1), p2 = position(q2);
    const std::size_t lo = std::min(p1, p2), hi = std::max(p1, p2);
    const std::size_t b1 = std::size_t{1} << p1, b2 = std::size_t{1} << p2;
    static const double r = 1.0 / std::sqrt(2.0);
    std::array<double, 4> probs{};
    const std::size_t rest = amps_.size() >> 2;
    for (std::size_t i = 0; i < rest; ++i) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(i, lo), hi);
        // c[j][k]: q1 = j, q2 = k
        const Complex c00 = amps_[base], c10 = amps_[base | b1], c01 = amps_[base | b2],
                      c11 = amps_[base | b1 | b2];
        // <Phi_ab| = sum_k (-1)^{bk} <k+a|<k| / sqrt2
        probs[0] += std::norm(r * (c00 + c11));
        probs[1] += std::norm(r * (c00 - c11));
        probs[2] += std::norm(r * (c10 + c01));
        probs[3] += std::norm(r * (c10 - c01));
    }
    return probs;
}

double StateRegister::bell_project(QubitHandle q1, QubitHandle q2, int a, int b) {
    if (q1 == q2) throw std::invalid_argument("bell measurement needs two distinct qubits");
    const std::size_t p1 = position(q1), p2 = position(q2);
    const std::size_t lo = std::min(p1, p2), hi = std::max(p1, p2);
    const std::size_t b1 = std::size_t{1} << p1, b2 = std::size_t{1} << p2;
    static const double r = 1.0 / std::sqrt(2.0);
    const double sign = (b & 1) ? -1.0 : 1.0;
    const std::size_t rest = amps_.size() >> 2;
    std::vector<Complex> next(rest);
    double p = 0.0;
    for (std::size_t i = 0; i < rest; ++i) {
        const std::size_t base = insert_zero_bit(insert_zero_bit(i, lo), hi);
        const Complex ca0 = amps_[base | ((a & 1) ? b1 : 0)];
        const Complex ca1 = amps_[base | ((a & 1) ? 0 : b1) | b2];
        next[i] = r * (ca0 + sign * ca1);
        p += std::norm(next[i]);
    }
    if (p <= 1e-300) throw std::domain_error("bell_project: branch has zero probability");
    const double scale = 1.0 / std::sqrt(p);
    for (auto& v : next) v *= scale;
    amps_ = std::move(next);
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(hi));
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(lo));
    return p;
}

StateRegister::BellResult StateRegister::bell_measure(QubitHandle q1, QubitHandle q2, Rng& rng) {
    BellResult res;
    res.branch_probs = bell_probabilities(q1, q2);
    const double u = rng.unit();
    double acc = 0.0;
    int pick = 3;
    for (int k = 0; k < 4; ++k) {
        acc += res.branch_probs[static_cast<std::size_t>(k)];
        if (u < acc && res.branch_probs[static_cast<std::size_t>(k)] > 0.0) {
            pick = k;
            break;
        }
    }
    while (res.branch_probs[static_cast<std::size_t>(pick)] <= 0.0) --pick;
    res.a = pick >> 1;
    res.b = pick & 1;
    bell_project(q1, q2, res.a, res.b);
    return res;
}

double StateRegister::probability_of_one(QubitHandle q) const {
    const std::size_t bit = std::size_t{1} << position(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) p += std::norm(amps_[i]);
    }
    return p;
}

void StateRegister::release_positions(std::size_t p, int v) {
    const std::size_t rest = amps_.size() >> 1;
    std::vector<Complex> next(rest);
    const std::size_t set = v ? (std::size_t{1} << p) : 0;
    for (std::size_t i = 0; i < rest; ++i) next[i] = amps_[insert_zero_bit(i, p) | set];
    amps_ = std::move(next);
    live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(p));
}

double StateRegister::project_z(QubitHandle q, int bit) {
    const std::size_t p = position(q);
    const double p1 = probability_of_one(q);
    const double prob = bit ? p1 : 1.0 - p1;
    if (prob <= 1e-300) throw std::domain_error("project_z: outcome has zero probability");
    release_positions(p, bit);
    const double scale = 1.0 / std::sqrt(norm_squared());
    for (auto& v : amps_) v *= scale;
    return prob;
}

StateRegister::ZResult StateRegister::measure_z(QubitHandle q, Rng& rng) {
    const double p1 = probability_of_one(q);
    const int bit = rng.unit() < p1 ? 1 : 0;
    return ZResult{bit, project_z(q, bit)};
}

DensityMatrix StateRegister::density_on(std::span<const QubitHandle> subset) const {
    if (subset.empty()) throw std::invalid_argument("density_on: subset is empty");
    const std::size_t k = subset.size();
    std::vector<std::size_t> pos(k);
    for (std::size_t t = 0; t < k; ++t) {
        pos[t] = position(subset[t]);
        for (std::size_t u = 0; u < t; ++u) {
            if (pos[u] == pos[t]) throw std::invalid_argument("density_on: duplicate qubit");
        }
    }
    std::vector<std::size_t> sorted = pos;
    std::sort(sorted.begin(), sorted.end());

    const std::size_t sub_dim = std::size_t{1} << k;
    std::vector<std::size_t> scatter(sub_dim, 0);
    for (std::size_t i = 0; i < sub_dim; ++i) {
        for (std::size_t t = 0; t < k; ++t) {
            if ((i >> (k - 1 - t)) & 1U) scatter[i] |= std::size_t{1} << pos[t];
        }
    }
    const auto d = static_cast<Eigen::Index>(sub_dim);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    const std::size_t rest = amps_.size() >> k;
    std::vector<Complex> col(sub_dim);
    for (std::size_t r = 0; r < rest; ++r) {
        std::size_t base = r;
        for (const std::size_t p : sorted) base = insert_zero_bit(base, p);
        for (std::size_t i = 0; i < sub_dim; ++i) col[i] = amps_[base | scatter[i]];
        for (std::size_t i = 0; i < sub_dim; ++i) {
            if (col[i] == Complex{}) continue;
            for (std::size_t j = 0; j < sub_dim; ++j) {
                rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += col[i] * std::conj(col[j]);
            }
        }
    }
    return DensityMatrix(std::move(rho));
}

std::vector<Complex> StateRegister::amplitudes_in(std::span<const QubitHandle> order) const {
    if (order.size() != live_.size()) {
        throw std::invalid_argument("amplitudes_in: order must list every live qubit");
    }
    const std::size_t k = order.size();
    std::vector<std::size_t> pos(k);
    for (std::size_t t = 0; t < k; ++t) pos[t] = position(order[t]);
    std::vector<Complex> out(amps_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t idx = 0;
        for (std::size_t t = 0; t < k; ++t) {
            if ((i >> (k - 1 - t)) & 1U) idx |= std::size_t{1} << pos[t];
        }
        out[i] = amps_[idx];
    }
    return out;
}

double StateRegister::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

}  // namespace obliq
