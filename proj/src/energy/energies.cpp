#include "tacsim/energy/energies.hpp"

namespace tacsim {

double inertia_energy(const std::vector<Vec3>& x, const std::vector<Vec3>& xhat,
                      const std::vector<double>& masses, std::vector<Vec3>* grad,
                      std::vector<Eigen::Triplet<double>>* hess) {
    double total = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const Vec3 d = x[i] - xhat[i];
        total += 0.5 * masses[i] * d.squaredNorm();
        if (grad) (*grad)[i] += masses[i] * d;
        if (hess)
            for (int k = 0; k < 3; ++k)
                hess->emplace_back(3 * i + k, 3 * i + k, masses[i]);
    }
    return total;
}

std::vector<Vec3> compute_xhat(const std::vector<Vec3>& x_t, const std::vector<Vec3>& v_t, double h,
                               const std::vector<double>& masses, const std::vector<Vec3>& f_ext) {
    std::vector<Vec3> xhat(x_t.size());
    for (size_t i = 0; i < x_t.size(); ++i)
        xhat[i] = x_t[i] + h * v_t[i] + (h * h / masses[i]) * f_ext[i];
    return xhat;
}

double AlConstraints::max_violation(const std::vector<Vec3>& x) const {
    double worst = 0;
    for (size_t c = 0; c < vertices.size(); ++c)
        worst = std::max(worst, (x[vertices[c]] - targets[c]).norm());
    return worst;
}

void AlConstraints::update_multipliers(const std::vector<Vec3>& x) {
    for (size_t c = 0; c < vertices.size(); ++c)
        multipliers[c] -= penalty * (x[vertices[c]] - targets[c]);
}

double augmented_lagrangian_energy(const std::vector<Vec3>& x, const AlConstraints& al,
                                   std::vector<Vec3>* grad,
                                   std::vector<Eigen::Triplet<double>>* hess) {
    double total = 0;
    for (size_t c = 0; c < al.vertices.size(); ++c) {
        const int v = al.vertices[c];
        const Vec3 d = x[v] - al.targets[c];
        total += -al.multipliers[c].dot(d) + 0.5 * al.penalty * d.squaredNorm();
        if (grad) (*grad)[v] += -al.multipliers[c] + al.penalty * d;
        if (hess)
            for (int k = 0; k < 3; ++k)
                hess->emplace_back(3 * v + k, 3 * v + k, al.penalty);
    }
    return total;
}

}  // namespace tacsim
