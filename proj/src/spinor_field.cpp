#include "mrfm/spinor_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mrfm/kernels.hpp"
#include "mrfm/spectral.hpp"

namespace mrfm {

SpinorField::SpinorField(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("SpinorField needs a grid");
  values_.assign(kComponents * grid_->size(), cplx{});
}

std::span<cplx> SpinorField::component(std::size_t index) {
  if (index >= kComponents) throw std::out_of_range("spinor component index");
  return std::span<cplx>(values_).subspan(index * size(), size());
}

std::span<const cplx> SpinorField::component(std::size_t index) const {
  if (index >= kComponents) throw std::out_of_range("spinor component index");
  return std::span<const cplx>(values_).subspan(index * size(), size());
}

SpinorField& SpinorField::operator*=(cplx factor) noexcept {
  for (auto& v : values_) v *= factor;
  return *this;
}

double field_norm2(const SpinorField& f) {
  const auto& k = kernels::active_table();
  const double cell = f.representation() == Representation::Position ? f.grid().dz()
                                                                        : f.grid().dp();
  return k.sum_abs2(f.data().data(), f.data().size()) * cell;
}

PairMasses pair_masses(const SpinorField& f) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("pair_masses expects a position-space field");
  }
  const auto& k = kernels::active_table();
  const std::size_t n = f.size();
  auto mass = [&](Spin s1, Spin s2) { return k.sum_abs2(f.component(s1, s2).data(), n); };
  const double dz = f.grid().dz();
  return {(mass(Spin::Up, Spin::Up) + mass(Spin::Down, Spin::Up)) * dz,
          (mass(Spin::Up, Spin::Down) + mass(Spin::Down, Spin::Down)) * dz};
}

namespace {

// ũ(p_k) = dz/√(2π) e^{-i p_k z_min} Σ_j u_j e^{-2πi jk/N}
void apply_momentum_phase(SpinorField& f, bool forward) {
  const auto& g = f.grid();
  const auto p = g.momenta();
  const double scale = forward ? g.dz() / std::sqrt(2.0 * std::numbers::pi)
                               : std::sqrt(2.0 * std::numbers::pi) / g.dz() /
                                     static_cast<double>(g.size());
  const double sign = forward ? -1.0 : 1.0;
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    auto u = f.component(c);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] *= std::polar(scale, sign * p[k] * g.z_min());
  }
}

}  // namespace

SpinorField to_momentum_space(const SpinorField& f) {
  if (f.representation() != Representation::Position) {
    throw std::invalid_argument("field is already in momentum space");
  }
  SpinorField out = f;
  SpectralTransform fft(f.size(), SpinorField::kComponents);
  fft.forward(out.data().data());
  apply_momentum_phase(out, true);
  out.set_representation(Representation::Momentum);
  return out;
}

SpinorField to_position_space(const SpinorField& f) {
  if (f.representation() != Representation::Momentum) {
    throw std::invalid_argument("field is already in position space");
  }
  SpinorField out = f;
  apply_momentum_phase(out, false);
  SpectralTransform fft(f.size(), SpinorField::kComponents);
  fft.inverse(out.data().data());
  out.set_representation(Representation::Position);
  return out;
}

AlignedVector<cplx> coherent_packet(const SpatialGrid& grid, std::complex<double> alpha) {
  const double z0 = std::numbers::sqrt2 * alpha.real();
  const double p0 = std::numbers::sqrt2 * alpha.imag();
  const double amp = std::pow(std::numbers::pi, -0.25);
  AlignedVector<cplx> u(grid.size());
  const auto z = grid.positions();
  double norm2 = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = z[j] - z0;
    u[j] = std::polar(amp * std::exp(-x * x / 2.0), p0 * z[j]);
    norm2 += std::norm(u[j]);
  }
  norm2 *= grid.dz();
  if (!(norm2 > 0.0)) throw std::invalid_argument("coherent packet lies outside the grid");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : u) v *= scale;
  return u;
}

SpinorField product_state(const GridPtr& grid, std::span<const cplx> packet,
                          const std::array<cplx, 4>& spin_amplitudes) {
  if (packet.size() != grid->size()) throw std::invalid_argument("packet/grid size mismatch");
  SpinorField f(grid);
  for (std::size_t c = 0; c < SpinorField::kComponents; ++c) {
    auto u = f.component(c);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = spin_amplitudes[c] * packet[j];
  }
  return f;
}

SpinorField coherent_bell_state(const GridPtr& grid, const PhysicalParams& params) {
  const auto packet = coherent_packet(*grid, params.alpha);
  const double r = 1.0 / std::numbers::sqrt2;
  return product_state(grid, packet, {cplx{r}, cplx{}, cplx{}, cplx{r}});
}

double l2_distance(const SpinorField& a, const SpinorField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("l2_distance: grids differ");
  if (a.representation() != b.representation()) {
    throw std::invalid_argument("l2_distance: representations differ");
  }
  double acc = 0.0;
  const auto x = a.data();
  const auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::norm(x[i] - y[i]);
  const double cell = a.representation() == Representation::Position ? a.grid().dz()
                                                                        : a.grid().dp();
  return std::sqrt(acc * cell);
}

}  // namespace mrfm
