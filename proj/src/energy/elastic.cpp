#include "tacsim/energy/elastic.hpp"

#include "tacsim/solver/spd.hpp"

namespace tacsim {
namespace {

Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

Mat3 cofactor(const Mat3& F) {
    Mat3 c;
    c.col(0) = F.col(1).cross(F.col(2));
    c.col(1) = F.col(2).cross(F.col(0));
    c.col(2) = F.col(0).cross(F.col(1));
    return c;
}

// d(vec F)/d(x0..x3), column-major vec, 9x12.
Eigen::Matrix<double, 9, 12> deformation_gradient_map(const Mat3& dm_inv) {
    Eigen::Matrix<double, 9, 12> G = Eigen::Matrix<double, 9, 12>::Zero();
    for (int j = 0; j < 3; ++j)       // column of F
        for (int i = 0; i < 3; ++i) {  // row of F
            const int row = 3 * j + i;
            for (int a = 0; a < 3; ++a) {  // non-root vertex a+1
                G(row, 3 * (a + 1) + i) = dm_inv(a, j);
                G(row, i) -= dm_inv(a, j);
            }
        }
    return G;
}

}  // namespace

double stable_neo_hookean_psi(const Mat3& F, double mu, double lam) {
    const double ic = F.squaredNorm();
    const double J = F.determinant();
    const double alpha = 1 + mu / lam;
    return 0.5 * mu * (ic - 3) + 0.5 * lam * (J - alpha) * (J - alpha) - mu * mu / (2 * lam);
}

double elastic_energy(const TetMesh& mesh, const std::vector<Vec3>& x, const MaterialParams& mat,
                      std::vector<Vec3>* grad, std::vector<Eigen::Triplet<double>>* hess,
                      bool project, double scale) {
    const double mu = mat.lame_mu();
    const double lam = mat.lame_lambda() + mat.lame_mu();
    const double alpha = 1 + mu / lam;

    double total = 0;
    for (size_t ti = 0; ti < mesh.tets.size(); ++ti) {
        const auto& t = mesh.tets[ti];
        const double vol = mesh.rest_volumes[ti];
        Mat3 ds;
        ds.col(0) = x[t[1]] - x[t[0]];
        ds.col(1) = x[t[2]] - x[t[0]];
        ds.col(2) = x[t[3]] - x[t[0]];
        const Mat3 F = ds * mesh.inverse_rest_matrices[ti];
        total += vol * stable_neo_hookean_psi(F, mu, lam);
        if (!grad && !hess) continue;

        const double J = F.determinant();
        const Mat3 gJ = cofactor(F);
        const Eigen::Matrix<double, 9, 12> G = deformation_gradient_map(mesh.inverse_rest_matrices[ti]);

        if (grad) {
            const Mat3 P = mu * F + lam * (J - alpha) * gJ;  // first Piola-Kirchhoff stress
            const Eigen::Map<const Eigen::Matrix<double, 9, 1>> p_vec(P.data());
            const Vec12 g = scale * vol * (G.transpose() * p_vec);
            for (int a = 0; a < 4; ++a) (*grad)[t[a]] += g.segment<3>(3 * a);
        }
        if (hess) {
            Eigen::Matrix<double, 9, 9> A = mu * Eigen::Matrix<double, 9, 9>::Identity();
            const Eigen::Map<const Eigen::Matrix<double, 9, 1>> gj_vec(gJ.data());
            A += lam * gj_vec * gj_vec.transpose();
            // d^2 J / dF^2: off-diagonal cross-product blocks over F's columns
            const double c = lam * (J - alpha);
            Eigen::Matrix<double, 9, 9> HJ = Eigen::Matrix<double, 9, 9>::Zero();
            HJ.block<3, 3>(0, 3) = -cross_matrix(F.col(2));
            HJ.block<3, 3>(0, 6) = cross_matrix(F.col(1));
            HJ.block<3, 3>(3, 0) = cross_matrix(F.col(2));
            HJ.block<3, 3>(3, 6) = -cross_matrix(F.col(0));
            HJ.block<3, 3>(6, 0) = -cross_matrix(F.col(1));
            HJ.block<3, 3>(6, 3) = cross_matrix(F.col(0));
            A += c * HJ;
            Mat12 K = scale * vol * (G.transpose() * A * G);
            if (project) K = spd_project(K);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j)
                            hess->emplace_back(3 * t[a] + i, 3 * t[b] + j, K(3 * a + i, 3 * b + j));
        }
    }
    return scale * total;
}

}  // namespace tacsim
