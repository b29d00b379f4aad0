#include "nhse/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nhse/floquet.hpp"
#include "nhse/models.hpp"
#include "nhse/parallel.hpp"
#include "nhse/spectral.hpp"

namespace nhse {

Complex SampledLoop::matrix_base(Complex energy) const {
  if (period > 0.0) return std::exp(-kI * energy * period);
  return energy;
}

namespace {

double spectral_radius(const std::vector<Complex>& values) {
  double r = 0.0;
  for (const Complex& v : values) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

namespace {

SampledLoop sample_any(const BlochFamily& m_of_k, int n_k, int workers, double period) {
  const std::vector<double> ks = k_grid(n_k);
  SampledLoop loop;
  loop.period = period;
  loop.matrices.resize(ks.size());
  std::vector<std::vector<Complex>> values(ks.size());
  parallel_for(ks.size(), workers, [&](std::size_t j) {
    loop.matrices[j] = m_of_k(ks[j]);
    values[j] = eigenvalues(loop.matrices[j], period > 0.0 ? "U(k,T)" : "H(k)");
    if (period > 0.0) {
      for (Complex& v : values[j]) v = quasi_energy(v, period);
    }
  });
  for (const auto& v : values) loop.energies.insert(loop.energies.end(), v.begin(), v.end());
  loop.scale = spectral_radius(loop.energies);
  return loop;
}

}  // namespace

SampledLoop sample_loop(const BlochFamily& h_of_k, int n_k, int workers) {
  if (n_k < 3) throw ValidationError("topology.sample_loop", "need at least 3 k samples");
  return sample_any(h_of_k, n_k, workers, 0.0);
}

SampledLoop sample_floquet_loop(const BlochFamily& u_of_k, double period, int n_k, int workers) {
  if (n_k < 3) throw ValidationError("topology.sample_loop", "need at least 3 k samples");
  if (!(period > 0.0)) throw ValidationError("topology.sample_loop", "period must be positive");
  return sample_any(u_of_k, n_k, workers, period);
}

WindingResult winding(const SampledLoop& loop, Complex energy, const WindingOptions& opt) {
  const char* where = "topology.winding";
  const int n = loop.samples();
  if (n < 3) throw ValidationError(where, "loop has fewer than 3 samples");
  const Complex base = loop.matrix_base(energy);
  const auto dim = loop.matrices.front().rows();
  // On-spectrum test in energy space: prod_i |e_i(k) - energy| equals
  // |det(H(k) - energy)| for Hamiltonian loops and stays meaningful for
  // Floquet loops, where real parts are compared modulo 2 pi / T.
  const double floor = opt.spectrum_threshold * std::pow(std::max(loop.scale, 1e-300),
                                                         static_cast<double>(dim));
  const auto per_sample = static_cast<std::size_t>(dim);
  const bool by_energy = loop.energies.size() == per_sample * static_cast<std::size_t>(n);
  std::vector<Complex> dets(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const ComplexMatrix& m = loop.matrices[static_cast<std::size_t>(j)];
    const Complex d = (m - base * ComplexMatrix::Identity(dim, dim)).determinant();
    double gap = std::abs(d);
    if (by_energy) {
      gap = 1.0;
      for (std::size_t i = 0; i < per_sample; ++i) {
        Complex diff = loop.energies[static_cast<std::size_t>(j) * per_sample + i] - energy;
        if (loop.period > 0.0) {
          diff = {std::remainder(diff.real(), 2.0 * M_PI / loop.period), diff.imag()};
        }
        gap *= std::abs(diff);
      }
    }
    if (!(gap > floor) || d == Complex{0.0, 0.0}) {
      std::ostringstream msg;
      msg << "base point " << energy << " lies on the spectrum (distance product " << gap
          << " at sample " << j << ")";
      throw NumericalError(where, msg.str());
    }
    dets[static_cast<std::size_t>(j)] = d;
  }
  double total = 0.0;
  double max_step = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex next = dets[static_cast<std::size_t>((j + 1) % n)];
    const double step = std::arg(next / dets[static_cast<std::size_t>(j)]);
    total += step;
    max_step = std::max(max_step, std::abs(step));
  }
  WindingResult out;
  out.base_point = energy;
  out.raw_phase = total / (2.0 * M_PI);
  out.winding = static_cast<int>(std::lround(out.raw_phase));
  out.residual = std::abs(out.raw_phase - out.winding);
  out.max_step = max_step;
  out.k_samples = n;
  if (out.residual >= opt.residual_tolerance || max_step > opt.max_step) {
    std::ostringstream msg;
    msg << "undersampled winding at base point " << energy << " (residual " << out.residual
        << ", max step " << max_step << " rad with n_k = " << n << "); raise n_k";
    throw NumericalError(where, msg.str());
  }
  return out;
}

WindingResult winding_1d(const BlochFamily& h_of_k, Complex base, int n_k,
                         const WindingOptions& opt) {
  return winding(sample_loop(h_of_k, n_k), base, opt);
}

WindingResult winding_2d(const std::function<ComplexMatrix(double, double)>& h,
                         Axis winding_axis, double fixed_value, Complex base, int n_k,
                         const WindingOptions& opt) {
  if (winding_axis == Axis::y) {
    return winding_1d([&](double ky) { return h(fixed_value, ky); }, base, n_k, opt);
  }
  return winding_1d([&](double kx) { return h(kx, fixed_value); }, base, n_k, opt);
}

Complex spectral_centroid(const std::vector<Complex>& energies) {
  if (energies.empty()) throw ValidationError("topology.centroid", "empty spectrum");
  Complex sum{0.0, 0.0};
  for (const Complex& e : energies) sum += e;
  return sum / static_cast<double>(energies.size());
}

std::vector<Complex> interior_base_grid(const std::vector<Complex>& energies, int m) {
  if (energies.empty()) throw ValidationError("topology.base_grid", "empty spectrum");
  if (m < 1) throw ValidationError("topology.base_grid", "grid size must be positive");
  double re_lo = std::numeric_limits<double>::infinity();
  double re_hi = -re_lo;
  double im_lo = re_lo;
  double im_hi = -re_lo;
  for (const Complex& e : energies) {
    re_lo = std::min(re_lo, e.real());
    re_hi = std::max(re_hi, e.real());
    im_lo = std::min(im_lo, e.imag());
    im_hi = std::max(im_hi, e.imag());
  }
  std::vector<Complex> grid;
  grid.reserve(static_cast<std::size_t>(m * m));
  for (int i = 1; i <= m; ++i) {
    const double re = re_lo + (re_hi - re_lo) * i / (m + 1);
    for (int j = 1; j <= m; ++j) {
      grid.emplace_back(re, im_lo + (im_hi - im_lo) * j / (m + 1));
    }
  }
  return grid;
}

AreaScan spectral_area_flag(const SampledLoop& loop, int m, const WindingOptions& opt) {
  AreaScan scan;
  for (const Complex& base : interior_base_grid(loop.energies, m)) {
    try {
      WindingResult w = winding(loop, base, opt);
      if (w.winding != 0) scan.nonzero = true;
      scan.windings.push_back(w);
    } catch (const NumericalError& e) {
      const std::string what = e.what();
      scan.skipped.emplace_back(base, what.find("undersampled") != std::string::npos
                                          ? "undersampled"
                                          : "on spectrum");
    }
  }
  return scan;
}

}  // namespace nhse
