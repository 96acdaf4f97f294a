#ifndef QNET_PHASE_HPP
#define QNET_PHASE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnet {

// Exact symbolic phase of the form  pi_coeff*pi + sum_i phi_coeffs[i]*phi_{i+1}.
// All coefficients are integers, so composition and comparison are exact;
// no floating point enters until eval().
struct PhaseExpression {
    int pi_coeff = 0;
    std::vector<int> phi_coeffs;  // coefficient of phi_1 .. phi_m

    PhaseExpression() = default;
    explicit PhaseExpression(std::size_t num_phis) : phi_coeffs(num_phis, 0) {}

    static PhaseExpression pi_times(int k, std::size_t num_phis) {
        PhaseExpression p(num_phis);
        p.pi_coeff = k;
        return p;
    }

    PhaseExpression& operator+=(const PhaseExpression& o) {
        if (phi_coeffs.size() < o.phi_coeffs.size()) phi_coeffs.resize(o.phi_coeffs.size(), 0);
        pi_coeff += o.pi_coeff;
        for (std::size_t i = 0; i < o.phi_coeffs.size(); ++i) phi_coeffs[i] += o.phi_coeffs[i];
        return *this;
    }
    friend PhaseExpression operator+(PhaseExpression a, const PhaseExpression& b) {
        a += b;
        return a;
    }
    PhaseExpression operator-(const PhaseExpression& o) const {
        PhaseExpression r = *this;
        if (r.phi_coeffs.size() < o.phi_coeffs.size()) r.phi_coeffs.resize(o.phi_coeffs.size(), 0);
        r.pi_coeff -= o.pi_coeff;
        for (std::size_t i = 0; i < o.phi_coeffs.size(); ++i) r.phi_coeffs[i] -= o.phi_coeffs[i];
        return r;
    }

    bool operator==(const PhaseExpression& o) const = default;

    // Same action on a state vector: equal phi coefficients and pi parts
    // congruent mod 2 (e^{2 pi i} = 1).
    bool same_action(const PhaseExpression& o) const {
        if (((pi_coeff - o.pi_coeff) % 2) != 0) return false;
        const std::size_t m = std::max(phi_coeffs.size(), o.phi_coeffs.size());
        for (std::size_t i = 0; i < m; ++i) {
            const int a = i < phi_coeffs.size() ? phi_coeffs[i] : 0;
            const int b = i < o.phi_coeffs.size() ? o.phi_coeffs[i] : 0;
            if (a != b) return false;
        }
        return true;
    }

    bool is_zero() const {
        if (pi_coeff != 0) return false;
        return !has_phi_terms();
    }
    bool has_phi_terms() const {
        for (int c : phi_coeffs)
            if (c != 0) return true;
        return false;
    }

    // Numeric value given concrete path phases (radians).
    double eval(const std::vector<double>& phis) const {
        if (phis.size() < phi_coeffs.size())
            throw std::invalid_argument("PhaseExpression::eval: too few phi values");
        double v = pi_coeff * 3.14159265358979323846;
        for (std::size_t i = 0; i < phi_coeffs.size(); ++i) v += phi_coeffs[i] * phis[i];
        return v;
    }

    std::string str() const {
        std::string out;
        auto term = [&out](int c, const std::string& sym) {
            if (c == 0) return;
            if (!out.empty()) out += c > 0 ? " + " : " - ";
            else if (c < 0) out += "-";
            const int a = c > 0 ? c : -c;
            if (a != 1) out += std::to_string(a) + "*";
            out += sym;
        };
        term(pi_coeff, "pi");
        for (std::size_t i = 0; i < phi_coeffs.size(); ++i)
            term(phi_coeffs[i], "phi" + std::to_string(i + 1));
        return out.empty() ? "0" : out;
    }
};

}  // namespace qnet

#endif
