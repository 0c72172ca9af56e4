#include "tacsim/energy/material.hpp"

namespace tacsim {

void MaterialParams::validate() const {
    if (youngs_modulus <= 0) throw ConfigError("material.youngs_modulus must be > 0");
    if (poisson_ratio <= 0 || poisson_ratio >= 0.5)
        throw ConfigError("material.poisson_ratio must be in (0, 0.5)");
    if (density <= 0) throw ConfigError("material.density must be > 0");
}

void ContactParams::validate() const {
    if (dhat <= 0) throw ConfigError("contact.dhat must be > 0");
    if (kappa <= 0) throw ConfigError("contact.kappa must be > 0");
    if (mu < 0) throw ConfigError("contact.mu must be >= 0");
    if (epsv <= 0) throw ConfigError("contact.epsv must be > 0");
}

}  // namespace tacsim
