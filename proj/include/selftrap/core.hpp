#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace selftrap {

/// Physical (dimensionful) description of an impurity immersed in a uniform
/// condensate. Any consistent unit system works; hbar defaults to 1.
struct PhysicalParams {
  double impurity_mass = 1.0;      // m_a
  double boson_mass = 1.0;         // m_b
  double impurity_coupling = 0.0;  // kappa, energy x volume
  double boson_coupling = 1.0;     // g > 0, energy x volume
  double density = 1.0;            // n_0, 1/volume
  int dimension = 3;
  double atom_number = 0.0;  // N, informational only
  double hbar = 1.0;
};

/// Healing length hbar / sqrt(g n_0 m_b).
double healing_length(const PhysicalParams& p);

/// Mean interparticle spacing n_0^{-1/d}.
double mean_spacing(const PhysicalParams& p);

/// Dimensionless parameter set shared by every formula in the library.
///
/// alpha = m_b/m_a, beta = kappa/g, gamma = spacing/healing length. Lengths are
/// measured in healing lengths and energies in units of g n_0.
struct ModelParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.5;
  int dim = 1;

  /// Self-trapping parameter beta^2 gamma^d / alpha.
  double zeta() const;
  /// gamma^d
  double gamma_pow_d() const;

  /// Throws std::invalid_argument unless alpha > 0, gamma > 0, dim in {1,2,3}
  /// and beta is finite.
  void validate() const;
};

ModelParams to_dimensionless(const PhysicalParams& p);

void validate_dimension(int dim);

/// Surface area of the unit sphere: 2, 2 pi, 4 pi for d = 1, 2, 3.
double unit_sphere_surface(int dim);

/// Volume of the d-ball of radius R (2R, pi R^2, 4 pi R^3 / 3).
double ball_volume(int dim, double radius);

/// Uniform radial grid on [0, R] for a radially symmetric field in d dimensions.
///
/// Node i sits at r_i = i h. Each node owns the dual cell
/// [r_i - h/2, r_i + h/2] clipped to [0, R]; its weight is the exact d-volume of
/// that spherical shell, so the weights sum to the ball volume. Neighbouring
/// cells share a face at r_{i+1/2} with area S_d r_{i+1/2}^{d-1}. Gradients
/// live on faces, which makes the discrete Laplacian the exact variational
/// derivative of the discrete gradient energy and gives the regular limit
/// d f''(0) at the origin automatically.
class RadialGrid {
 public:
  RadialGrid(int dim, double radius, std::size_t points);

  int dim() const { return dim_; }
  double radius() const { return radius_; }
  std::size_t size() const { return nodes_.size(); }
  double spacing() const { return spacing_; }
  double volume() const { return volume_; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// face_areas()[i] is the area of the face between node i and node i + 1.
  std::span<const double> face_areas() const { return face_areas_; }

  /// Sum_i w_i f_i.
  double integrate(std::span<const double> f) const;
  /// Sum_i w_i f_i^2.
  double norm2(std::span<const double> f) const;
  /// Sum_i w_i f_i g_i.
  double inner(std::span<const double> f, std::span<const double> g) const;
  /// Discrete integral of |grad f|^2 from face differences.
  double gradient_energy(std::span<const double> f) const;
  /// Discrete radial Laplacian (zero-flux through r = 0 and through r = R).
  /// A Dirichlet field simply keeps its last node at zero.
  void laplacian(std::span<const double> f, std::span<double> out) const;

  /// Throws std::invalid_argument if f does not have one value per node.
  void check_size(std::span<const double> f, const char* what) const;

 private:
  int dim_;
  double radius_;
  double spacing_;
  double volume_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> face_areas_;
};

/// Condensate and impurity wave-functions sampled on grid nodes.
struct FieldPair {
  std::vector<double> psi;
  std::vector<double> chi;
};

struct EnergyBreakdown {
  double e_bec = 0.0;
  double e_int = 0.0;
  double e_kin = 0.0;
  double e_tot = 0.0;
  double epsilon = 0.0;  // impurity eigenvalue (Rayleigh quotient)
};

/// Energies of a radially symmetric field pair, in units of g n_0.
///
/// E_bec = gamma^{-d} int (|psi'|^2/2 - psi^2 + psi^4/2), E_int = beta int chi^2
/// psi^2, E_kin = alpha/2 int |chi'|^2. epsilon is the Rayleigh quotient of the
/// impurity equation, <chi, (-alpha/2 Lap + beta psi^2) chi> / <chi, chi>.
EnergyBreakdown energy_breakdown(const ModelParams& m, const RadialGrid& grid, const FieldPair& f);

/// Condensate density psi(0)^2 at the impurity position.
double density_at_origin(const FieldPair& f);

}  // namespace selftrap
