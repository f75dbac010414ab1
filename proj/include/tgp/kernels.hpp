#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace tgp {

/// One exponential term c * exp(-b s) of a memory kernel.
struct PronyTerm {
  double weight = 0.0;  ///< c, amplitude of mu
  double rate = 1.0;    ///< b, decay rate (1/time)

  friend bool operator==(const PronyTerm&, const PronyTerm&) = default;
};

/// Memory kernel mu(s) = sum_i c_i exp(-b_i s) with relaxation kernel
/// g(s) = int_s^inf mu = sum_i (c_i / b_i) exp(-b_i s).
///
/// Construction validates c_i >= 0 and b_i > 0. When `unit_mass` is set the
/// total mass sum_i c_i / b_i^2 must equal one to 1e-12 relative; nothing is
/// rescaled implicitly (see normalize_unit_mass).
class PronyKernel {
 public:
  PronyKernel() = default;
  explicit PronyKernel(std::vector<PronyTerm> terms, bool unit_mass = false);

  std::span<const PronyTerm> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  bool unit_mass() const { return unit_mass_; }

  friend bool operator==(const PronyKernel&, const PronyKernel&) = default;

 private:
  std::vector<PronyTerm> terms_;
  bool unit_mass_ = false;
};

double evaluate_g(const PronyKernel& k, double s);
double evaluate_mu(const PronyKernel& k, double s);
/// d mu / ds, used by the Dafermos-condition checks.
double evaluate_mu_derivative(const PronyKernel& k, double s);

/// int_0^inf g(s) ds = sum_i c_i / b_i^2.
double total_mass(const PronyKernel& k);

PronyKernel normalize_unit_mass(const PronyKernel& k);

/// Largest delta with mu' + delta mu <= 0, i.e. the smallest rate among
/// terms carrying positive weight.
double dafermos_rate(const PronyKernel& k);

/// Kernel of g_eps(s) = g(s / eps) / eps: b -> b / eps, c -> c / eps^2.
PronyKernel rescale(const PronyKernel& k, double eps);

/// Multiplies every weight by `factor` >= 0.
PronyKernel scale_weights(const PronyKernel& k, double factor);

/// Term-wise union, i.e. the kernel of mu_a + mu_b.
PronyKernel combine(const PronyKernel& a, const PronyKernel& b);

/// g_tau(s) = exp(-s / tau) / tau, i.e. {(1/tau^2, 1/tau)}.
PronyKernel make_cattaneo(double tau);

// ---------------------------------------------------------------------------
// Thermal laws

struct GurtinPipkin {
  PronyKernel kernel;
};

/// Instantaneous (parabolic) conduction; carries no kernel.
struct Fourier {};

struct Cattaneo {
  double tau = 1.0;
};

/// Mix of instantaneous conduction with weight 1 - ell and a memory law with weight ell.
struct ColemanGurtin {
  double ell = 0.5;
  PronyKernel kernel;
};

enum class LawKind { GurtinPipkin, Fourier, Cattaneo, ColemanGurtin };

/// Constitutive heat law of one thermal channel.
class KernelSpec {
 public:
  using Variant = std::variant<GurtinPipkin, Fourier, Cattaneo, ColemanGurtin>;

  KernelSpec() : law_(Fourier{}) {}
  KernelSpec(GurtinPipkin law);
  KernelSpec(Fourier law) : law_(law) {}
  KernelSpec(Cattaneo law);
  KernelSpec(ColemanGurtin law);

  const Variant& law() const { return law_; }
  LawKind kind() const;

  /// Share of the conductivity acting instantaneously: 1 for Fourier,
  /// 1 - ell for Coleman-Gurtin, 0 otherwise.
  double instantaneous_fraction() const;
  /// Share carried by the memory kernel (complement of the above).
  double memory_fraction() const;
  /// Kernel whose Prony modes become auxiliary history fields; empty for Fourier.
  PronyKernel memory_kernel() const;
  std::size_t mode_count() const { return memory_kernel().size(); }

 private:
  Variant law_;
};

/// Short tag: "gp", "fourier", "cattaneo", "cg".
std::string law_tag(LawKind kind);
/// Table abbreviation: "GP", "F", "C", "CG".
std::string law_abbrev(LawKind kind);
LawKind parse_law_tag(const std::string& tag);

}  // namespace tgp
