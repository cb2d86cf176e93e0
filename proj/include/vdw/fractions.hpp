#pragma once

#include <algorithm>
#include <cmath>

namespace vdw {

// Volume, mass and energy fraction of phase 1.
struct Fractions {
    double alpha = 0.5;
    double phi = 0.5;
    double xi = 0.5;

    Fractions complement() const noexcept { return {1.0 - alpha, 1.0 - phi, 1.0 - xi}; }

    // max(|alpha-phi|, |phi-xi|, |alpha-xi|)
    double spread() const noexcept {
        return std::max({std::abs(alpha - phi), std::abs(phi - xi), std::abs(alpha - xi)});
    }

    bool in_open_cube() const noexcept {
        return alpha > 0.0 && alpha < 1.0 && phi > 0.0 && phi < 1.0 && xi > 0.0 && xi < 1.0;
    }

    bool inside(double margin) const noexcept {
        return alpha >= margin && alpha <= 1.0 - margin && phi >= margin &&
               phi <= 1.0 - margin && xi >= margin && xi <= 1.0 - margin;
    }
};

inline double max_abs_diff(const Fractions& u, const Fractions& v) noexcept {
    return std::max({std::abs(u.alpha - v.alpha), std::abs(u.phi - v.phi),
                     std::abs(u.xi - v.xi)});
}

}  // namespace vdw
