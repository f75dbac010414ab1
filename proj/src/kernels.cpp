#include "tgp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

void require_time(double s, const char* what) {
  if (!(s >= 0.0)) throw DomainError(std::string(what) + ": time must be >= 0");
}

void require_memory_kernel(const PronyKernel& k, const char* law) {
  if (k.empty()) throw InvalidKernel(std::string(law) + " law requires a non-empty kernel");
  for (const auto& t : k.terms()) {
    if (!(t.weight > 0.0)) {
      throw InvalidKernel(std::string(law) + " law requires strictly positive kernel weights");
    }
  }
}

}  // namespace

PronyKernel::PronyKernel(std::vector<PronyTerm> terms, bool unit_mass)
    : terms_(std::move(terms)), unit_mass_(unit_mass) {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.weight) || t.weight < 0.0) {
      throw InvalidKernel("kernel weight must be finite and >= 0");
    }
    if (!std::isfinite(t.rate) || t.rate <= 0.0) {
      throw InvalidKernel("kernel rate must be finite and > 0");
    }
  }
  if (unit_mass_) {
    const double mass = total_mass(*this);
    if (std::abs(mass - 1.0) > 1e-12) {
      throw InvalidKernel("kernel flagged unit-mass has total mass " + std::to_string(mass));
    }
  }
}

double evaluate_g(const PronyKernel& k, double s) {
  require_time(s, "evaluate_g");
  double sum = 0.0;
  for (const auto& t : k.terms()) sum += t.weight / t.rate * std::exp(-t.rate * s);
  return sum;
}

double evaluate_mu(const PronyKernel& k, double s) {
  require_time(s, "evaluate_mu");
  double sum = 0.0;
  for (const auto& t : k.terms()) sum += t.weight * std::exp(-t.rate * s);
  return sum;
}

double evaluate_mu_derivative(const PronyKernel& k, double s) {
  require_time(s, "evaluate_mu_derivative");
  double sum = 0.0;
  for (const auto& t : k.terms()) sum -= t.weight * t.rate * std::exp(-t.rate * s);
  return sum;
}

double total_mass(const PronyKernel& k) {
  double sum = 0.0;
  for (const auto& t : k.terms()) sum += t.weight / (t.rate * t.rate);
  return sum;
}

PronyKernel normalize_unit_mass(const PronyKernel& k) {
  const double mass = total_mass(k);
  if (!(mass > 0.0)) throw InvalidKernel("cannot normalize a zero kernel");
  std::vector<PronyTerm> terms(k.terms().begin(), k.terms().end());
  for (auto& t : terms) t.weight /= mass;
  // One correction pass absorbs the rounding of the division.
  PronyKernel draft(terms);
  const double residual = total_mass(draft);
  for (auto& t : terms) t.weight /= residual;
  return PronyKernel(std::move(terms), /*unit_mass=*/true);
}

double dafermos_rate(const PronyKernel& k) {
  double rate = std::numeric_limits<double>::infinity();
  for (const auto& t : k.terms()) {
    if (t.weight > 0.0) rate = std::min(rate, t.rate);
  }
  if (!std::isfinite(rate)) throw InvalidKernel("Dafermos rate undefined for a kernel without positive terms");
  return rate;
}

PronyKernel rescale(const PronyKernel& k, double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("rescale: eps must lie in (0, 1]");
  if (eps == 1.0) return k;
  std::vector<PronyTerm> terms;
  terms.reserve(k.size());
  for (const auto& t : k.terms()) terms.push_back({t.weight / (eps * eps), t.rate / eps});
  return PronyKernel(std::move(terms));
}

PronyKernel scale_weights(const PronyKernel& k, double factor) {
  if (!(factor >= 0.0)) throw DomainError("scale_weights: factor must be >= 0");
  std::vector<PronyTerm> terms(k.terms().begin(), k.terms().end());
  for (auto& t : terms) t.weight *= factor;
  return PronyKernel(std::move(terms));
}

PronyKernel combine(const PronyKernel& a, const PronyKernel& b) {
  std::vector<PronyTerm> terms(a.terms().begin(), a.terms().end());
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PronyKernel(std::move(terms));
}

PronyKernel make_cattaneo(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("Cattaneo relaxation time must be > 0");
  return PronyKernel({{1.0 / (tau * tau), 1.0 / tau}});
}

// ---------------------------------------------------------------------------

KernelSpec::KernelSpec(GurtinPipkin law) : law_(std::move(law)) {
  require_memory_kernel(std::get<GurtinPipkin>(law_).kernel, "Gurtin-Pipkin");
}

KernelSpec::KernelSpec(Cattaneo law) : law_(law) {
  if (!(law.tau > 0.0) || !std::isfinite(law.tau)) throw DomainError("Cattaneo relaxation time must be > 0");
}

KernelSpec::KernelSpec(ColemanGurtin law) : law_(std::move(law)) {
  const auto& cg = std::get<ColemanGurtin>(law_);
  if (!(cg.ell > 0.0 && cg.ell < 1.0)) throw DomainError("Coleman-Gurtin weight ell must lie in (0, 1)");
  require_memory_kernel(cg.kernel, "Coleman-Gurtin");
}

LawKind KernelSpec::kind() const { return static_cast<LawKind>(law_.index()); }

double KernelSpec::instantaneous_fraction() const {
  switch (kind()) {
    case LawKind::Fourier: return 1.0;
    case LawKind::ColemanGurtin: return 1.0 - std::get<ColemanGurtin>(law_).ell;
    default: return 0.0;
  }
}

double KernelSpec::memory_fraction() const {
  switch (kind()) {
    case LawKind::Fourier: return 0.0;
    case LawKind::ColemanGurtin: return std::get<ColemanGurtin>(law_).ell;
    default: return 1.0;
  }
}

PronyKernel KernelSpec::memory_kernel() const {
  switch (kind()) {
    case LawKind::GurtinPipkin: return std::get<GurtinPipkin>(law_).kernel;
    case LawKind::Cattaneo: return make_cattaneo(std::get<Cattaneo>(law_).tau);
    case LawKind::ColemanGurtin: return std::get<ColemanGurtin>(law_).kernel;
    case LawKind::Fourier: break;
  }
  return PronyKernel{};
}

std::string law_tag(LawKind kind) {
  switch (kind) {
    case LawKind::GurtinPipkin: return "gp";
    case LawKind::Fourier: return "fourier";
    case LawKind::Cattaneo: return "cattaneo";
    case LawKind::ColemanGurtin: return "cg";
  }
  return "?";
}

std::string law_abbrev(LawKind kind) {
  switch (kind) {
    case LawKind::GurtinPipkin: return "GP";
    case LawKind::Fourier: return "F";
    case LawKind::Cattaneo: return "C";
    case LawKind::ColemanGurtin: return "CG";
  }
  return "?";
}

LawKind parse_law_tag(const std::string& tag) {
  if (tag == "gp" || tag == "GP" || tag == "gurtin-pipkin") return LawKind::GurtinPipkin;
  if (tag == "fourier" || tag == "F") return LawKind::Fourier;
  if (tag == "cattaneo" || tag == "C") return LawKind::Cattaneo;
  if (tag == "cg" || tag == "CG" || tag == "coleman-gurtin") return LawKind::ColemanGurtin;
  throw ConfigError("unknown thermal law '" + tag + "'");
}

}  // namespace tgp
