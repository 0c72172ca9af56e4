#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

struct MaterialParams {
    double youngs_modulus = 1.23e5;  // Pa
    double poisson_ratio = 0.43;
    double density = 1.01e3;  // kg/m^3

    double lame_mu() const { return youngs_modulus / (2 * (1 + poisson_ratio)); }
    double lame_lambda() const {
        return youngs_modulus * poisson_ratio /
               ((1 + poisson_ratio) * (1 - 2 * poisson_ratio));
    }
    void validate() const;
};

struct ContactParams {
    double dhat = 5e-5;   // m (resolved from the scene-diagonal fraction)
    double kappa = 1e6;   // barrier stiffness
    double mu = 0.5;      // friction coefficient
    double epsv = 1e-3;   // m/s static/dynamic transition threshold

    void validate() const;
};

}  // namespace tacsim
